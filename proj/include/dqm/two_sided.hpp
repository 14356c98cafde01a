#pragma once

// Quaternion building blocks of the dual solver:
//
//  * the two-sided pair  A2 Y B2 = C2,  A3 Y B3 = C3  (common Y), and
//  * the coupled system  A X + A1 Y R_C = B,  X C + L_A Y C1 = D.
//
// Both expose their intermediate terms so the dual-system solver can reuse
// them verbatim on the infinitesimal-part equations.

#include <memory>
#include <string>
#include <vector>

#include "dqm/quat_matrix.hpp"
#include "dqm/solve_outcome.hpp"

namespace dqm {

template <typename Scalar = double>
struct TwoSidedPairTerms {
  using M = QuatMatrix<Scalar>;

  M a2, b2, c2, a3, b3, c3;
  M a2_pinv, b2_pinv, b3_pinv;
  M l_a2, r_b2, r_b3, l_a3;
  M a00, b00, c00, d00;
  M l_a00, r_b00;
  M phi;
  std::vector<ConditionCheck> conditions;

  Eigen::Index y_rows() const { return a2.cols(); }
  Eigen::Index y_cols() const { return b2.rows(); }

  /// Phi + L_{A2} L_{A00} W1 + W2 R_{B00} R_{B2} + L_{A2} W3 R_{B3} + L_{A3} W4 R_{B2}
  M assemble(M const& w1, M const& w2, M const& w3, M const& w4) const {
    return phi + l_a2 * l_a00 * w1 + w2 * r_b00 * r_b2 + l_a2 * w3 * r_b3 + l_a3 * w4 * r_b2;
  }

  M sample(ParameterDraw& draw) const {
    auto const w1 = draw.matrix<Scalar>(y_rows(), y_cols());
    auto const w2 = draw.matrix<Scalar>(y_rows(), y_cols());
    auto const w3 = draw.matrix<Scalar>(y_rows(), y_cols());
    auto const w4 = draw.matrix<Scalar>(y_rows(), y_cols());
    return assemble(w1, w2, w3, w4);
  }
};

/// Builds every derived matrix of the pair A2 Y B2 = C2, A3 Y B3 = C3 and
/// evaluates its five solvability conditions. `tol` should already carry the
/// problem-scaled singular-value floor; `scale` is the input norm sum.
template <typename Scalar>
TwoSidedPairTerms<Scalar> two_sided_pair_terms(QuatMatrix<Scalar> a2, QuatMatrix<Scalar> b2,
                                               QuatMatrix<Scalar> c2, QuatMatrix<Scalar> a3,
                                               QuatMatrix<Scalar> b3, QuatMatrix<Scalar> c3,
                                               Tolerance const& tol, double scale) {
  if (a2.cols() != a3.cols() || b2.rows() != b3.rows() || c2.rows() != a2.rows() ||
      c2.cols() != b2.cols() || c3.rows() != a3.rows() || c3.cols() != b3.cols()) {
    throw ShapeError("two-sided pair: shapes A2 " + shape_string(a2) + ", B2 " +
                     shape_string(b2) + ", C2 " + shape_string(c2) + ", A3 " + shape_string(a3) +
                     ", B3 " + shape_string(b3) + ", C3 " + shape_string(c3) +
                     " do not admit a common unknown");
  }
  using M = QuatMatrix<Scalar>;
  M const a2_pinv = pinv(a2, tol);
  M const b2_pinv = pinv(b2, tol);
  M const b3_pinv = pinv(b3, tol);
  M const l_a2 = M::Identity(a2.cols()) - a2_pinv * a2;
  M const r_a2 = M::Identity(a2.rows()) - a2 * a2_pinv;
  M const l_b2 = M::Identity(b2.cols()) - b2_pinv * b2;
  M const r_b2 = M::Identity(b2.rows()) - b2 * b2_pinv;
  M const l_b3 = M::Identity(b3.cols()) - b3_pinv * b3;
  M const r_b3 = M::Identity(b3.rows()) - b3 * b3_pinv;
  M const l_a3 = proj_L(a3, tol);
  M const r_a3 = proj_R(a3, tol);

  M const a00 = a3 * l_a2;
  M const b00 = r_b2 * b3;
  M const c00 = c3 - a3 * a2_pinv * c2 * b2_pinv * b3;
  M const a00_pinv = pinv(a00, tol);
  M const r_a00 = M::Identity(a00.rows()) - a00 * a00_pinv;
  M const l_a00 = M::Identity(a00.cols()) - a00_pinv * a00;
  M const d00 = r_a00 * a3;
  M const d00_pinv = pinv(d00, tol);
  M const b00_pinv = pinv(b00, tol);
  M const r_b00 = M::Identity(b00.rows()) - b00 * b00_pinv;
  M const l_b00 = M::Identity(b00.cols()) - b00_pinv * b00;

  M const phi = a2_pinv * c2 * b2_pinv + l_a2 * a00_pinv * c00 * b3_pinv -
                l_a2 * a00_pinv * a3 * d00_pinv * r_a00 * c00 * b3_pinv +
                d00_pinv * r_a00 * c00 * b00_pinv * r_b2;

  double const c2_scale = scale + static_cast<double>(c2.norm());
  double const c3_scale = scale + static_cast<double>(c3.norm());
  double const c00_scale = scale + static_cast<double>(c00.norm());

  TwoSidedPairTerms<Scalar> t{a2,      b2,      c2,    a3,   b3,   c3,   a2_pinv, b2_pinv,
                              b3_pinv, l_a2,    r_b2,  r_b3, l_a3, a00,  b00,     c00,
                              d00,     l_a00,   r_b00, phi,  {}};
  t.conditions.push_back(detail::zero_check("R_{A2}C2=0", r_a2 * c2, c2_scale, tol));
  t.conditions.push_back(detail::zero_check("C2L_{B2}=0", c2 * l_b2, c2_scale, tol));
  t.conditions.push_back(detail::zero_check("R_{A3}C3=0", r_a3 * c3, c3_scale, tol));
  t.conditions.push_back(detail::zero_check("C3L_{B3}=0", c3 * l_b3, c3_scale, tol));
  t.conditions.push_back(
      detail::zero_check("R_{A00}C00L_{B00}=0", r_a00 * c00 * l_b00, c00_scale, tol));
  return t;
}

/// Solves A2 Y B2 = C2, A3 Y B3 = C3 for a common Y.
template <typename Scalar>
SolveOutcome<QuatMatrix<Scalar>> solve_two_sided_pair(
    QuatMatrix<Scalar> const& a2, QuatMatrix<Scalar> const& b2, QuatMatrix<Scalar> const& c2,
    QuatMatrix<Scalar> const& a3, QuatMatrix<Scalar> const& b3, QuatMatrix<Scalar> const& c3,
    Tolerance const& tol = {}) {
  tol.validate();
  double const scale = static_cast<double>(a2.norm() + b2.norm() + c2.norm() + a3.norm() +
                                           b3.norm() + c3.norm());
  auto terms = std::make_shared<TwoSidedPairTerms<Scalar> const>(
      two_sided_pair_terms(a2, b2, c2, a3, b3, c3, tol.scaled_to(scale), scale));

  SolveOutcome<QuatMatrix<Scalar>> out;
  out.conditions = terms->conditions;
  out.failed_conditions = detail::failed_names(out.conditions);
  out.solvable = out.failed_conditions.empty();
  if (out.solvable) {
    out.particular = terms->phi;
    out.sample = [terms](std::uint64_t seed, double s) {
      ParameterDraw draw(seed, s);
      return terms->sample(draw);
    };
  }
  return out;
}

template <typename Scalar = double>
struct CoupledSolution {
  QuatMatrix<Scalar> x;
  QuatMatrix<Scalar> y;
};

template <typename Scalar = double>
struct CoupledSystemTerms {
  using M = QuatMatrix<Scalar>;

  M a, a1, b, c, c1, d;
  M a_pinv, c_pinv, l_a, r_c;
  TwoSidedPairTerms<Scalar> pair;
  ConditionCheck ad_eq_bc;

  /// A^dagger (B - A1 Y R_C) + L_A (D - L_A Y C1) C^dagger + L_A U1 R_C
  M assemble_x(M const& y, M const& u1) const {
    return a_pinv * (b - a1 * y * r_c) + l_a * (d - l_a * y * c1) * c_pinv + l_a * u1 * r_c;
  }

  Eigen::Index x_rows() const { return a.cols(); }
  Eigen::Index x_cols() const { return c.rows(); }
};

/// Reduces A X + A1 Y R_C = B, X C + L_A Y C1 = D to a two-sided pair in Y.
/// Shapes: A, A1: m x n; B: m x k; C, C1: k x l; D: n x l; X, Y: n x k.
template <typename Scalar>
CoupledSystemTerms<Scalar> coupled_system_terms(QuatMatrix<Scalar> const& a,
                                                QuatMatrix<Scalar> const& a1,
                                                QuatMatrix<Scalar> const& b,
                                                QuatMatrix<Scalar> const& c,
                                                QuatMatrix<Scalar> const& c1,
                                                QuatMatrix<Scalar> const& d, Tolerance const& tol,
                                                double scale) {
  if (a1.rows() != a.rows() || a1.cols() != a.cols() || b.rows() != a.rows() ||
      c.rows() != b.cols() || c1.rows() != c.rows() || c1.cols() != c.cols() ||
      d.rows() != a.cols() || d.cols() != c.cols()) {
    throw ShapeError("coupled system: shapes A " + shape_string(a) + ", A1 " + shape_string(a1) +
                     ", B " + shape_string(b) + ", C " + shape_string(c) + ", C1 " +
                     shape_string(c1) + ", D " + shape_string(d) + " are not conformable");
  }
  using M = QuatMatrix<Scalar>;
  M const a_pinv = pinv(a, tol);
  M const c_pinv = pinv(c, tol);
  M const l_a = M::Identity(a.cols()) - a_pinv * a;
  M const r_a = M::Identity(a.rows()) - a * a_pinv;
  M const l_c = M::Identity(c.cols()) - c_pinv * c;
  M const r_c = M::Identity(c.rows()) - c * c_pinv;

  auto pair = two_sided_pair_terms<Scalar>(r_a * a1, r_c, r_a * b, l_a, c1 * l_c, d * l_c, tol,
                                           scale);
  ConditionCheck ad_eq_bc;
  ad_eq_bc.name = "AD=BC";
  ad_eq_bc.residual = static_cast<double>((a * d - b * c).norm());
  ad_eq_bc.threshold =
      tol.zero_abs * (1.0 + scale + static_cast<double>(a.norm() * d.norm() + b.norm() * c.norm()));
  ad_eq_bc.passed = ad_eq_bc.residual <= ad_eq_bc.threshold;
  return {a, a1, b, c, c1, d, a_pinv, c_pinv, l_a, r_c, std::move(pair), ad_eq_bc};
}

/// Solves A X + A1 Y R_C = B, X C + L_A Y C1 = D for (X, Y).
template <typename Scalar>
SolveOutcome<CoupledSolution<Scalar>> solve_coupled_system(
    QuatMatrix<Scalar> const& a, QuatMatrix<Scalar> const& a1, QuatMatrix<Scalar> const& b,
    QuatMatrix<Scalar> const& c, QuatMatrix<Scalar> const& c1, QuatMatrix<Scalar> const& d,
    Tolerance const& tol = {}) {
  tol.validate();
  double const scale = static_cast<double>(a.norm() + a1.norm() + b.norm() + c.norm() +
                                           c1.norm() + d.norm());
  auto terms = std::make_shared<CoupledSystemTerms<Scalar> const>(
      coupled_system_terms(a, a1, b, c, c1, d, tol.scaled_to(scale), scale));

  SolveOutcome<CoupledSolution<Scalar>> out;
  out.conditions.push_back(terms->ad_eq_bc);
  out.conditions.insert(out.conditions.end(), terms->pair.conditions.begin(),
                        terms->pair.conditions.end());
  out.failed_conditions = detail::failed_names(out.conditions);
  out.solvable = out.failed_conditions.empty();
  if (out.solvable) {
    auto const zero = QuatMatrix<Scalar>::Zero(terms->x_rows(), terms->x_cols());
    out.particular = CoupledSolution<Scalar>{terms->assemble_x(terms->pair.phi, zero),
                                             terms->pair.phi};
    out.sample = [terms](std::uint64_t seed, double s) {
      ParameterDraw draw(seed, s);
      auto const u1 = draw.matrix<Scalar>(terms->x_rows(), terms->x_cols());
      auto y = terms->pair.sample(draw);
      auto x = terms->assemble_x(y, u1);
      return CoupledSolution<Scalar>{std::move(x), std::move(y)};
    };
  }
  return out;
}

}  // namespace dqm
