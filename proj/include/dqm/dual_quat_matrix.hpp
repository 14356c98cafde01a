#pragma once

// Matrices over the dual quaternions, A = A0 + A1 eps with eps^2 = 0.

#include <cmath>
#include <ostream>
#include <string>

#include "dqm/quat_matrix.hpp"

namespace dqm {

template <typename Scalar = double>
struct DualQuatMatrix {
  using Index = Eigen::Index;
  using Part = QuatMatrix<Scalar>;

  Part std_part;
  Part inf_part;

  DualQuatMatrix(Part standard, Part infinitesimal)
      : std_part(std::move(standard)), inf_part(std::move(infinitesimal)) {
    if (std_part.rows() != inf_part.rows() || std_part.cols() != inf_part.cols()) {
      throw ShapeError("standard part is " + shape_string(std_part) +
                       " but infinitesimal part is " + shape_string(inf_part));
    }
  }

  DualQuatMatrix(Index rows, Index cols) : std_part(rows, cols), inf_part(rows, cols) {}

  /// The canonical embedding A0 + 0 eps.
  static DualQuatMatrix FromStandard(Part standard) {
    Part zero = Part::Zero(standard.rows(), standard.cols());
    return DualQuatMatrix(std::move(standard), std::move(zero));
  }

  static DualQuatMatrix Zero(Index rows, Index cols) { return DualQuatMatrix(rows, cols); }

  static DualQuatMatrix Identity(Index n) { return FromStandard(Part::Identity(n)); }

  Index rows() const { return std_part.rows(); }
  Index cols() const { return std_part.cols(); }
  bool is_square() const { return rows() == cols(); }

  DualQuaternion<Scalar> operator()(Index r, Index c) const {
    return {std_part(r, c), inf_part(r, c)};
  }

  void set(Index r, Index c, DualQuaternion<Scalar> const& v) {
    std_part.set(r, c, v.std_part);
    inf_part.set(r, c, v.inf_part);
  }

  DualQuatMatrix conj_transpose() const {
    return {std_part.conj_transpose(), inf_part.conj_transpose()};
  }

  DualQuatMatrix eta_conj_transpose(EtaAxis eta) const {
    return {std_part.eta_conj_transpose(eta), inf_part.eta_conj_transpose(eta)};
  }

  /// Root-sum-square of the two parts' norms.
  Scalar norm() const { return std::hypot(std_part.norm(), inf_part.norm()); }

  DualQuatMatrix operator-() const { return {-std_part, -inf_part}; }

  friend DualQuatMatrix operator+(DualQuatMatrix const& a, DualQuatMatrix const& b) {
    return {a.std_part + b.std_part, a.inf_part + b.inf_part};
  }

  friend DualQuatMatrix operator-(DualQuatMatrix const& a, DualQuatMatrix const& b) {
    return {a.std_part - b.std_part, a.inf_part - b.inf_part};
  }

  friend DualQuatMatrix operator*(DualQuatMatrix const& a, DualQuatMatrix const& b) {
    if (a.cols() != b.rows()) {
      throw ShapeError("dual matrix product of " + shape_string(a.std_part) + " and " +
                       shape_string(b.std_part));
    }
    return {a.std_part * b.std_part, a.std_part * b.inf_part + a.inf_part * b.std_part};
  }

  friend DualQuatMatrix operator*(Scalar s, DualQuatMatrix const& m) {
    return {s * m.std_part, s * m.inf_part};
  }

  bool operator==(DualQuatMatrix const& o) const {
    return std_part == o.std_part && inf_part == o.inf_part;
  }
};

template <typename Scalar>
DualQuatMatrix<Scalar> eta_conj_transpose(DualQuatMatrix<Scalar> const& a, EtaAxis eta) {
  return a.eta_conj_transpose(eta);
}

/// True when ||A - A^{eta*}|| <= zero_abs * (1 + ||A||) on both parts.
template <typename Scalar>
bool is_eta_hermitian(DualQuatMatrix<Scalar> const& a, EtaAxis eta, Tolerance const& tol = {}) {
  if (!a.is_square()) {
    throw ShapeError("eta-Hermitian test needs a square matrix, got " + shape_string(a.std_part));
  }
  auto const h = a.eta_conj_transpose(eta);
  double const bound = tol.zero_abs * (1.0 + static_cast<double>(a.norm()));
  return static_cast<double>((a.std_part - h.std_part).norm()) <= bound &&
         static_cast<double>((a.inf_part - h.inf_part).norm()) <= bound;
}

/// Approximate equality of both parts, scaled by the operands.
template <typename Scalar>
bool approx_equal(DualQuatMatrix<Scalar> const& a, DualQuatMatrix<Scalar> const& b,
                  Tolerance const& tol = {}) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  double const bound =
      tol.zero_abs * (1.0 + static_cast<double>(std::max(a.norm(), b.norm())));
  return static_cast<double>((a - b).norm()) <= bound;
}

template <typename Scalar>
std::ostream& operator<<(std::ostream& os, DualQuatMatrix<Scalar> const& m) {
  return os << m.std_part << "+ eps *\n" << m.inf_part;
}

}  // namespace dqm
