#pragma once

// Dense quaternion matrices.
//
// A quaternion matrix is stored through its Cayley-Dickson split A = P + Q j
// with complex P, Q (P = W + X i, Q = Y + Z i for the real coefficient
// matrices W, X, Y, Z). Products then reduce to complex GEMMs:
//
//   (P1 + Q1 j)(P2 + Q2 j) = (P1 P2 - Q1 conj(Q2)) + (P1 Q2 + Q1 conj(P2)) j
//
// and the complex adjoint [[P, Q], [-conj(Q), conj(P)]] is a faithful real
// algebra embedding. Rank and Moore-Penrose inverse go through the SVD of the
// adjoint, whose singular values come in equal pairs.

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <complex>
#include <initializer_list>
#include <numeric>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "dqm/quaternion.hpp"

namespace dqm {

class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class BlockSymmetryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numerical thresholds. Singular values at or below
/// max(rank_rel * sigma_max, rank_abs) count as zero; a matrix M is treated
/// as zero when ||M|| <= zero_abs * (1 + scale).
struct Tolerance {
  double rank_rel = 1e-10;
  double zero_abs = 1e-10;
  double rank_abs = 0.0;

  void validate() const {
    if (!(rank_rel > 0) || !(zero_abs > 0) || rank_abs < 0) {
      throw std::invalid_argument("tolerances must be strictly positive");
    }
  }

  /// Same knobs with the absolute singular-value floor pinned to the problem
  /// scale, so numerically-zero intermediate products are not inverted.
  Tolerance scaled_to(double scale) const {
    Tolerance t = *this;
    t.rank_abs = std::max(rank_abs, zero_abs * (1.0 + scale));
    return t;
  }
};

template <typename Scalar = double>
class QuatMatrix {
 public:
  using Index = Eigen::Index;
  using Complex = std::complex<Scalar>;
  using ComplexMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;
  using RealMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using QuaternionType = Quaternion<Scalar>;

  QuatMatrix(Index rows, Index cols)
      : simplex_(ComplexMatrix::Zero(check_dim(rows), check_dim(cols))),
        perplex_(ComplexMatrix::Zero(rows, cols)) {}

  QuatMatrix(ComplexMatrix simplex, ComplexMatrix perplex)
      : simplex_(std::move(simplex)), perplex_(std::move(perplex)) {
    check_dim(simplex_.rows());
    check_dim(simplex_.cols());
    if (simplex_.rows() != perplex_.rows() || simplex_.cols() != perplex_.cols()) {
      throw ShapeError("simplex and perplex parts differ in shape");
    }
  }

  /// Row-major nested list, e.g. {{i, 0}, {0, j}}.
  QuatMatrix(std::initializer_list<std::initializer_list<QuaternionType>> rows)
      : QuatMatrix(static_cast<Index>(rows.size()),
                   rows.size() ? static_cast<Index>(rows.begin()->size()) : 0) {
    Index r = 0;
    for (auto const& row : rows) {
      if (static_cast<Index>(row.size()) != cols()) throw ShapeError("ragged initializer list");
      Index c = 0;
      for (auto const& q : row) set(r, c++, q);
      ++r;
    }
  }

  static QuatMatrix Zero(Index rows, Index cols) { return QuatMatrix(rows, cols); }

  static QuatMatrix Identity(Index n) {
    QuatMatrix m(n, n);
    m.simplex_.setIdentity();
    return m;
  }

  static QuatMatrix FromCoefficients(RealMatrix const& w, RealMatrix const& x,
                                     RealMatrix const& y, RealMatrix const& z) {
    if (x.rows() != w.rows() || y.rows() != w.rows() || z.rows() != w.rows() ||
        x.cols() != w.cols() || y.cols() != w.cols() || z.cols() != w.cols()) {
      throw ShapeError("coefficient matrices differ in shape");
    }
    ComplexMatrix p(w.rows(), w.cols()), q(w.rows(), w.cols());
    p.real() = w;
    p.imag() = x;
    q.real() = y;
    q.imag() = z;
    return QuatMatrix(std::move(p), std::move(q));
  }

  Index rows() const { return simplex_.rows(); }
  Index cols() const { return simplex_.cols(); }
  bool is_square() const { return rows() == cols(); }

  ComplexMatrix const& simplex() const { return simplex_; }
  ComplexMatrix const& perplex() const { return perplex_; }

  QuaternionType operator()(Index r, Index c) const {
    Complex const p = simplex_(r, c), q = perplex_(r, c);
    return {p.real(), p.imag(), q.real(), q.imag()};
  }

  void set(Index r, Index c, QuaternionType const& v) {
    simplex_(r, c) = Complex(v.w, v.x);
    perplex_(r, c) = Complex(v.y, v.z);
  }

  QuatMatrix& operator+=(QuatMatrix const& o) {
    require_same_shape(o, "+");
    simplex_ += o.simplex_;
    perplex_ += o.perplex_;
    return *this;
  }

  QuatMatrix& operator-=(QuatMatrix const& o) {
    require_same_shape(o, "-");
    simplex_ -= o.simplex_;
    perplex_ -= o.perplex_;
    return *this;
  }

  QuatMatrix operator-() const { return QuatMatrix(-simplex_, -perplex_); }

  friend QuatMatrix operator+(QuatMatrix a, QuatMatrix const& b) { return a += b; }
  friend QuatMatrix operator-(QuatMatrix a, QuatMatrix const& b) { return a -= b; }

  friend QuatMatrix operator*(QuatMatrix const& a, QuatMatrix const& b) {
    if (a.cols() != b.rows()) {
      throw ShapeError("matrix product of " + shape_string(a) + " and " + shape_string(b));
    }
    return QuatMatrix(a.simplex_ * b.simplex_ - a.perplex_ * b.perplex_.conjugate(),
                      a.simplex_ * b.perplex_ + a.perplex_ * b.simplex_.conjugate());
  }

  friend QuatMatrix operator*(Scalar s, QuatMatrix const& m) {
    return QuatMatrix(s * m.simplex_, s * m.perplex_);
  }
  friend QuatMatrix operator*(QuatMatrix const& m, Scalar s) { return s * m; }

  // (p + q j)(P + Q j) = (pP - q conj(Q)) + (pQ + q conj(P)) j
  friend QuatMatrix operator*(QuaternionType const& s, QuatMatrix const& m) {
    Complex const p(s.w, s.x), q(s.y, s.z);
    return QuatMatrix(p * m.simplex_ - q * m.perplex_.conjugate(),
                      p * m.perplex_ + q * m.simplex_.conjugate());
  }

  // (P + Q j)(p + q j) = (Pp - Q conj(q)) + (Pq + Q conj(p)) j
  friend QuatMatrix operator*(QuatMatrix const& m, QuaternionType const& s) {
    Complex const p(s.w, s.x), q(s.y, s.z);
    return QuatMatrix(m.simplex_ * p - m.perplex_ * std::conj(q),
                      m.simplex_ * q + m.perplex_ * std::conj(p));
  }

  /// A*: (P + Q j)* = P^H - Q^T j.
  QuatMatrix conj_transpose() const {
    return QuatMatrix(simplex_.adjoint(), -perplex_.transpose());
  }

  /// A^{eta*} = -eta A* eta, with eta acting as a scalar on every entry.
  QuatMatrix eta_conj_transpose(EtaAxis eta) const {
    auto const u = QuaternionType::unit(eta);
    return -(u * conj_transpose() * u);
  }

  /// Quaternionic Frobenius norm (equals ||adjoint||_F / sqrt(2)).
  Scalar norm() const {
    return std::sqrt(simplex_.squaredNorm() + perplex_.squaredNorm());
  }

  ComplexMatrix adjoint_matrix() const {
    ComplexMatrix out(2 * rows(), 2 * cols());
    out << simplex_, perplex_, -perplex_.conjugate(), simplex_.conjugate();
    return out;
  }

  /// Inverse of adjoint_matrix(). The redundant blocks are averaged.
  static QuatMatrix FromAdjoint(ComplexMatrix const& m) {
    if (m.rows() % 2 != 0 || m.cols() % 2 != 0 || m.rows() == 0 || m.cols() == 0) {
      throw ShapeError("complex adjoint must have positive even dimensions");
    }
    Index const r = m.rows() / 2, c = m.cols() / 2;
    auto const p11 = m.topLeftCorner(r, c);
    auto const p12 = m.topRightCorner(r, c);
    auto const p21 = m.bottomLeftCorner(r, c);
    auto const p22 = m.bottomRightCorner(r, c);
    double const asym = std::sqrt(static_cast<double>(
        (p11 - p22.conjugate()).squaredNorm() + (p12 + p21.conjugate()).squaredNorm()));
    double const scale = std::max(1.0, static_cast<double>(m.norm()));
    if (asym > 1e-6 * scale) {
      throw BlockSymmetryError("matrix is not the complex adjoint of a quaternion matrix "
                               "(block asymmetry " + std::to_string(asym) + ")");
    }
    return QuatMatrix(Scalar(0.5) * (p11 + p22.conjugate()),
                      Scalar(0.5) * (p12 - p21.conjugate()));
  }

  bool operator==(QuatMatrix const& o) const {
    return rows() == o.rows() && cols() == o.cols() && simplex_ == o.simplex_ &&
           perplex_ == o.perplex_;
  }

  friend std::string shape_string(QuatMatrix const& m) {
    return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
  }

 private:
  static Index check_dim(Index n) {
    if (n <= 0) throw ShapeError("quaternion matrices must have positive dimensions");
    return n;
  }

  void require_same_shape(QuatMatrix const& o, char const* op) const {
    if (rows() != o.rows() || cols() != o.cols()) {
      throw ShapeError(std::string("operator") + op + " on " + shape_string(*this) + " and " +
                       shape_string(o));
    }
  }

  ComplexMatrix simplex_;
  ComplexMatrix perplex_;
};

template <typename Scalar>
QuatMatrix<Scalar> conj_transpose(QuatMatrix<Scalar> const& a) {
  return a.conj_transpose();
}

template <typename Scalar>
QuatMatrix<Scalar> eta_conj_transpose(QuatMatrix<Scalar> const& a, EtaAxis eta) {
  return a.eta_conj_transpose(eta);
}

template <typename Scalar>
typename QuatMatrix<Scalar>::ComplexMatrix to_adjoint(QuatMatrix<Scalar> const& a) {
  return a.adjoint_matrix();
}

template <typename Scalar>
QuatMatrix<Scalar> from_adjoint(typename QuatMatrix<Scalar>::ComplexMatrix const& m) {
  return QuatMatrix<Scalar>::FromAdjoint(m);
}

template <typename Scalar>
std::ostream& operator<<(std::ostream& os, QuatMatrix<Scalar> const& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    os << "[";
    for (Eigen::Index c = 0; c < m.cols(); ++c) os << (c ? ", " : "") << m(r, c);
    os << "]\n";
  }
  return os;
}

namespace detail {

template <typename Scalar>
using AdjointSvd = Eigen::JacobiSVD<typename QuatMatrix<Scalar>::ComplexMatrix>;

template <typename Scalar>
double singular_value_cutoff(Eigen::Matrix<Scalar, Eigen::Dynamic, 1> const& sv,
                             Tolerance const& tol) {
  double const sigma_max = sv.size() ? static_cast<double>(sv(0)) : 0.0;
  return std::max(tol.rank_rel * sigma_max, tol.rank_abs);
}

// Singular values of the adjoint pair up; keep or drop each pair as a unit so
// the retained subspace stays quaternionic.
template <typename Scalar>
Eigen::Index retained_pairs(Eigen::Matrix<Scalar, Eigen::Dynamic, 1> const& sv,
                            Tolerance const& tol) {
  double const cutoff = singular_value_cutoff<Scalar>(sv, tol);
  Eigen::Index pairs = 0;
  for (Eigen::Index s = 0; s < sv.size(); s += 2) {
    if (static_cast<double>(sv(s)) > cutoff) ++pairs;
  }
  return pairs;
}

}  // namespace detail

/// Rank over the quaternions: half the numerical rank of the complex adjoint.
template <typename Scalar>
Eigen::Index rank(QuatMatrix<Scalar> const& a, Tolerance const& tol = {}) {
  tol.validate();
  detail::AdjointSvd<Scalar> svd(a.adjoint_matrix());
  return detail::retained_pairs<Scalar>(svd.singularValues(), tol);
}

/// Moore-Penrose inverse via truncated SVD of the complex adjoint.
template <typename Scalar>
QuatMatrix<Scalar> pinv(QuatMatrix<Scalar> const& a, Tolerance const& tol = {}) {
  tol.validate();
  using ComplexMatrix = typename QuatMatrix<Scalar>::ComplexMatrix;
  detail::AdjointSvd<Scalar> svd(a.adjoint_matrix(), Eigen::ComputeThinU | Eigen::ComputeThinV);
  auto const& sv = svd.singularValues();
  Eigen::Index const kept = 2 * detail::retained_pairs<Scalar>(sv, tol);
  if (kept == 0) return QuatMatrix<Scalar>::Zero(a.cols(), a.rows());
  auto const v = svd.matrixV().leftCols(kept);
  auto const u = svd.matrixU().leftCols(kept);
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> const inv = sv.head(kept).cwiseInverse();
  ComplexMatrix const adj_pinv = v * inv.asDiagonal() * u.adjoint();
  return QuatMatrix<Scalar>::FromAdjoint(adj_pinv);
}

namespace detail {

// Orthogonal projector onto the trailing (dropped) singular vectors. Equals
// I - A^dagger A or I - A A^dagger, but is exactly zero when nothing is
// dropped rather than a residue of rounding noise.
template <typename Scalar>
QuatMatrix<Scalar> null_space_projector(QuatMatrix<Scalar> const& a, Tolerance const& tol,
                                        bool right) {
  using ComplexMatrix = typename QuatMatrix<Scalar>::ComplexMatrix;
  AdjointSvd<Scalar> svd(a.adjoint_matrix(), right ? Eigen::ComputeFullV : Eigen::ComputeFullU);
  Eigen::Index const kept = 2 * retained_pairs<Scalar>(svd.singularValues(), tol);
  ComplexMatrix const& basis = right ? svd.matrixV() : svd.matrixU();
  auto const null = basis.rightCols(basis.cols() - kept);
  return QuatMatrix<Scalar>::FromAdjoint(null * null.adjoint());
}

}  // namespace detail

/// L_A = I - A^dagger A (n x n for an m x n matrix).
template <typename Scalar>
QuatMatrix<Scalar> proj_L(QuatMatrix<Scalar> const& a, Tolerance const& tol = {}) {
  tol.validate();
  return detail::null_space_projector(a, tol, true);
}

/// R_A = I - A A^dagger (m x m for an m x n matrix).
template <typename Scalar>
QuatMatrix<Scalar> proj_R(QuatMatrix<Scalar> const& a, Tolerance const& tol = {}) {
  tol.validate();
  return detail::null_space_projector(a, tol, false);
}

/// Assembles a block matrix from a row-major grid. Every block in a grid row
/// must share its height and every block in a grid column its width.
template <typename Scalar>
QuatMatrix<Scalar> blocks(std::vector<std::vector<QuatMatrix<Scalar>>> const& grid) {
  using Index = Eigen::Index;
  if (grid.empty() || grid.front().empty()) throw ShapeError("empty block grid");
  std::size_t const ncols = grid.front().size();
  std::vector<Index> heights, widths;
  for (auto const& row : grid) {
    if (row.size() != ncols) throw ShapeError("ragged block grid");
    heights.push_back(row.front().rows());
  }
  for (auto const& b : grid.front()) widths.push_back(b.cols());
  for (std::size_t r = 0; r < grid.size(); ++r) {
    for (std::size_t c = 0; c < ncols; ++c) {
      if (grid[r][c].rows() != heights[r] || grid[r][c].cols() != widths[c]) {
        throw ShapeError("block (" + std::to_string(r) + "," + std::to_string(c) + ") is " +
                         shape_string(grid[r][c]) + ", expected " + std::to_string(heights[r]) +
                         "x" + std::to_string(widths[c]));
      }
    }
  }
  Index const total_rows = std::accumulate(heights.begin(), heights.end(), Index{0});
  Index const total_cols = std::accumulate(widths.begin(), widths.end(), Index{0});
  typename QuatMatrix<Scalar>::ComplexMatrix p(total_rows, total_cols), q(total_rows, total_cols);
  Index r0 = 0;
  for (std::size_t r = 0; r < grid.size(); ++r) {
    Index c0 = 0;
    for (std::size_t c = 0; c < ncols; ++c) {
      p.block(r0, c0, heights[r], widths[c]) = grid[r][c].simplex();
      q.block(r0, c0, heights[r], widths[c]) = grid[r][c].perplex();
      c0 += widths[c];
    }
    r0 += heights[r];
  }
  return QuatMatrix<Scalar>(std::move(p), std::move(q));
}

template <typename Scalar>
QuatMatrix<Scalar> hcat(std::vector<QuatMatrix<Scalar>> const& row) {
  return blocks<Scalar>({row});
}

template <typename Scalar>
QuatMatrix<Scalar> vcat(std::vector<QuatMatrix<Scalar>> const& column) {
  std::vector<std::vector<QuatMatrix<Scalar>>> grid;
  for (auto const& b : column) grid.push_back({b});
  return blocks<Scalar>(grid);
}

struct MarsagliaStyanResult {
  Eigen::Index lhs_rank = 0;
  Eigen::Index rhs_rank = 0;
  bool holds = false;
};

/// Evaluates both sides of the bordered-rank identity
///   r[[A, B L_D], [R_E C, 0]] = r[[A, B, 0], [C, 0, E], [0, D, 0]] - r(E) - r(D)
/// for A: n x m, B: n x l, C: k x m, D: l1 x l, E: k x l2. The identity always
/// holds, so this is a self-test of the rank engine.
template <typename Scalar>
MarsagliaStyanResult marsaglia_styan_check(QuatMatrix<Scalar> const& a, QuatMatrix<Scalar> const& b,
                                           QuatMatrix<Scalar> const& c, QuatMatrix<Scalar> const& d,
                                           QuatMatrix<Scalar> const& e, Tolerance const& tol = {}) {
  if (b.rows() != a.rows() || c.cols() != a.cols() || d.cols() != b.cols() ||
      e.rows() != c.rows()) {
    throw ShapeError("marsaglia_styan_check: blocks are not conformable");
  }
  using M = QuatMatrix<Scalar>;
  double const scale = static_cast<double>(a.norm() + b.norm() + c.norm() + d.norm() + e.norm());
  Tolerance const t = tol.scaled_to(scale);

  M const lhs = blocks<Scalar>({{a, b * proj_L(d, t)},
                                {proj_R(e, t) * c, M::Zero(c.rows(), b.cols())}});
  M const rhs = blocks<Scalar>({{a, b, M::Zero(a.rows(), e.cols())},
                                {c, M::Zero(c.rows(), b.cols()), e},
                                {M::Zero(d.rows(), a.cols()), d, M::Zero(d.rows(), e.cols())}});
  MarsagliaStyanResult out;
  out.lhs_rank = rank(lhs, t);
  out.rhs_rank = rank(rhs, t) - rank(e, t) - rank(d, t);
  out.holds = out.lhs_rank == out.rhs_rank;
  return out;
}

}  // namespace dqm
