#pragma once

// Single dual quaternion equations A X = B and X C = D, and eta-Hermitian
// solutions of A X = B.

#include <memory>
#include <string>
#include <vector>

#include "dqm/dual_system.hpp"

namespace dqm {

template <typename Scalar = double>
struct EquationResult {
  SolveOutcome<DualQuatMatrix<Scalar>> outcome;
  RankReport report;
};

namespace detail {

template <typename Scalar>
void finish_single_equation(EquationResult<Scalar>& result, ConditionMode mode) {
  RankReport& report = result.report;
  report.projector_verdict = all_passed(report.projector_conditions);
  report.rank_verdict = true;
  for (auto const& e : report.entries) report.rank_verdict = report.rank_verdict && e.passed;
  if (mode == ConditionMode::both && report.projector_verdict != report.rank_verdict) {
    throw ConditionFamilyDisagreement(
        std::string("projector conditions ") + (report.projector_verdict ? "pass" : "fail") +
        " but rank conditions " + (report.rank_verdict ? "pass" : "fail"));
  }
  auto& out = result.outcome;
  if (mode != ConditionMode::rank) out.conditions = report.projector_conditions;
  if (mode != ConditionMode::projector) {
    for (auto const& e : report.entries) {
      out.conditions.push_back({e.name, static_cast<double>(e.lhs_rank),
                                static_cast<double>(e.rhs_rank), e.passed});
    }
  }
  out.failed_conditions = failed_names(out.conditions);
  out.solvable = mode == ConditionMode::rank ? report.rank_verdict : report.projector_verdict;
}

}  // namespace detail

/// A X = B with A: m x n, B: m x k. General solution
///   X0 = A0^+ B0 + L_{A0} W,   X1 = A0^+ (B11 - A11 W) + L_{A0} W1,
///   W = A2^+ C2 + L_{A2} W2,
/// with B11 = B1 - A1 A0^+ B0, A11 = A1 L_{A0}, A2 = R_{A0} A11, C2 = R_{A0} B11.
template <typename Scalar>
EquationResult<Scalar> solve_ax_b(DualQuatMatrix<Scalar> const& a,
                                  DualQuatMatrix<Scalar> const& b, Tolerance const& tol = {},
                                  ConditionMode mode = ConditionMode::both) {
  tol.validate();
  if (a.rows() != b.rows()) {
    throw ShapeError("AX=B needs A and B with equal row counts; got A " +
                     shape_string(a.std_part) + ", B " + shape_string(b.std_part));
  }
  using M = QuatMatrix<Scalar>;
  double const scale = static_cast<double>(a.norm() + b.norm());
  Tolerance const t = tol.scaled_to(scale);
  auto const &a0 = a.std_part, &a1 = a.inf_part, &b0 = b.std_part, &b1 = b.inf_part;
  Eigen::Index const m = a0.rows(), n = a0.cols(), k = b0.cols();

  M const a0_pinv = pinv(a0, t);
  M const l_a0 = M::Identity(n) - a0_pinv * a0;
  M const r_a0 = M::Identity(m) - a0 * a0_pinv;
  M const b11 = b1 - a1 * a0_pinv * b0;
  M const a11 = a1 * l_a0;
  M const a2 = r_a0 * a11;
  M const c2 = r_a0 * b11;
  M const a2_pinv = pinv(a2, t);
  M const l_a2 = M::Identity(n) - a2_pinv * a2;
  M const r_a2 = M::Identity(m) - a2 * a2_pinv;

  EquationResult<Scalar> result;
  auto& report = result.report;
  report.projector_conditions = {
      detail::zero_check("R_{A0}B0=0", r_a0 * b0, scale + static_cast<double>(b0.norm()), t),
      detail::zero_check("R_{A2}C2=0", r_a2 * c2, scale + static_cast<double>(c2.norm()), t)};
  Eigen::Index const rank_a0 = rank(a0, t);
  report.entries = {
      detail::rank_equality("RC1", hcat<Scalar>({a0, b0}), rank_a0, t),
      detail::rank_equality("RC3", blocks<Scalar>({{a0, b1, a1}, {M::Zero(m, n), b0, a0}}),
                            rank(blocks<Scalar>({{a0, a1}, {M::Zero(m, n), a0}}), t), t)};
  detail::finish_single_equation(result, mode);

  if (result.outcome.solvable) {
    struct Terms {
      M a0_pinv, l_a0, x0_base, b11, a11, w_base, l_a2;
      DualQuatMatrix<Scalar> assemble(M const& w1, M const& w2) const {
        M const w = w_base + l_a2 * w2;
        return {x0_base + l_a0 * w, a0_pinv * (b11 - a11 * w) + l_a0 * w1};
      }
    };
    auto terms = std::make_shared<Terms const>(
        Terms{a0_pinv, l_a0, a0_pinv * b0, b11, a11, a2_pinv * c2, l_a2});
    result.outcome.particular = terms->assemble(M::Zero(n, k), M::Zero(n, k));
    result.outcome.sample = [terms, n, k](std::uint64_t seed, double s) {
      ParameterDraw draw(seed, s);
      auto const w1 = draw.matrix<Scalar>(n, k);
      auto const w2 = draw.matrix<Scalar>(n, k);
      return terms->assemble(w1, w2);
    };
  }
  return result;
}

/// X C = D with C: k x l, D: n x l (X: n x k). General solution
///   X0 = D0 C0^+ + U R_{C0},   X1 = (D11 - U C11) C0^+ + U1 R_{C0},
///   U = C3 B3^+ + U2 R_{B3},
/// with D11 = D1 - D0 C0^+ C1, C11 = R_{C0} C1, B3 = C11 L_{C0}, C3 = D11 L_{C0}.
template <typename Scalar>
EquationResult<Scalar> solve_xc_d(DualQuatMatrix<Scalar> const& c,
                                  DualQuatMatrix<Scalar> const& d, Tolerance const& tol = {},
                                  ConditionMode mode = ConditionMode::both) {
  tol.validate();
  if (c.cols() != d.cols()) {
    throw ShapeError("XC=D needs C and D with equal column counts; got C " +
                     shape_string(c.std_part) + ", D " + shape_string(d.std_part));
  }
  using M = QuatMatrix<Scalar>;
  double const scale = static_cast<double>(c.norm() + d.norm());
  Tolerance const t = tol.scaled_to(scale);
  auto const &c0 = c.std_part, &c1 = c.inf_part, &d0 = d.std_part, &d1 = d.inf_part;
  Eigen::Index const k = c0.rows(), l = c0.cols(), n = d0.rows();

  M const c0_pinv = pinv(c0, t);
  M const l_c0 = M::Identity(l) - c0_pinv * c0;
  M const r_c0 = M::Identity(k) - c0 * c0_pinv;
  M const d11 = d1 - d0 * c0_pinv * c1;
  M const c11 = r_c0 * c1;
  M const b3 = c11 * l_c0;
  M const c3 = d11 * l_c0;
  M const b3_pinv = pinv(b3, t);
  M const l_b3 = M::Identity(l) - b3_pinv * b3;
  M const r_b3 = M::Identity(k) - b3 * b3_pinv;

  EquationResult<Scalar> result;
  auto& report = result.report;
  report.projector_conditions = {
      detail::zero_check("D0L_{C0}=0", d0 * l_c0, scale + static_cast<double>(d0.norm()), t),
      detail::zero_check("C3L_{B3}=0", c3 * l_b3, scale + static_cast<double>(c3.norm()), t)};
  Eigen::Index const rank_c0 = rank(c0, t);
  report.entries = {
      detail::rank_equality("RC2", vcat<Scalar>({c0, d0}), rank_c0, t),
      detail::rank_equality("RC6", blocks<Scalar>({{c0, M::Zero(k, l)}, {d1, d0}, {c1, c0}}),
                            rank(blocks<Scalar>({{c0, M::Zero(k, l)}, {c1, c0}}), t), t)};
  detail::finish_single_equation(result, mode);

  if (result.outcome.solvable) {
    struct Terms {
      M c0_pinv, r_c0, x0_base, d11, c11, u_base, r_b3;
      DualQuatMatrix<Scalar> assemble(M const& u1, M const& u2) const {
        M const u = u_base + u2 * r_b3;
        return {x0_base + u * r_c0, (d11 - u * c11) * c0_pinv + u1 * r_c0};
      }
    };
    auto terms = std::make_shared<Terms const>(
        Terms{c0_pinv, r_c0, d0 * c0_pinv, d11, c11, c3 * b3_pinv, r_b3});
    result.outcome.particular = terms->assemble(M::Zero(n, k), M::Zero(n, k));
    result.outcome.sample = [terms, n, k](std::uint64_t seed, double s) {
      ParameterDraw draw(seed, s);
      auto const u1 = draw.matrix<Scalar>(n, k);
      auto const u2 = draw.matrix<Scalar>(n, k);
      return terms->assemble(u1, u2);
    };
  }
  return result;
}

template <typename Scalar = double>
struct EtaHermitianResult {
  SolveOutcome<DualQuatMatrix<Scalar>> outcome;
  /// Report restricted to the conditions that remain informative once
  /// C = A^{eta*} and D = B: EQ-AD=BC, EQ-DUALCOMPAT, RC1, RC3, RC4, RC7 and
  /// the projector conditions R_{A0}B0, R_{A2}C2, R_{A3}C3, R_{A00}C00L_{B00}.
  RankReport report;
  /// The underlying system A X = B, X A^{eta*} = B.
  DualSystemResult<Scalar> system;
};

/// (X + X^{eta*}) / 2, which is eta-Hermitian for every square X.
template <typename Scalar>
DualQuatMatrix<Scalar> eta_symmetrize(DualQuatMatrix<Scalar> const& x, EtaAxis eta) {
  return Scalar(0.5) * (x + x.eta_conj_transpose(eta));
}

/// eta-Hermitian solutions of A X = B for square A, B with B = B^{eta*}.
/// Solves A X~ = B, X~ A^{eta*} = B and returns (X~ + X~^{eta*}) / 2.
template <typename Scalar>
EtaHermitianResult<Scalar> solve_ax_b_eta_hermitian(DualQuatMatrix<Scalar> const& a,
                                                    DualQuatMatrix<Scalar> const& b, EtaAxis eta,
                                                    Tolerance const& tol = {},
                                                    ConditionMode mode = ConditionMode::both) {
  tol.validate();
  if (!a.is_square() || !b.is_square() || a.rows() != b.rows()) {
    throw ShapeError("eta-Hermitian AX=B needs square A and B of equal size; got A " +
                     shape_string(a.std_part) + ", B " + shape_string(b.std_part));
  }
  if (!is_eta_hermitian(b, eta, tol)) {
    throw PreconditionError(std::string("B is not ") + to_char(eta) + "-Hermitian");
  }

  EtaHermitianResult<Scalar> result{{}, {}, solve_dual_system(a, b, a.eta_conj_transpose(eta), b,
                                                              tol, mode)};
  auto const& full = result.system;

  static constexpr char const* kEntries[] = {"EQ-AD=BC", "EQ-DUALCOMPAT", "RC1", "RC3", "RC4",
                                             "RC7"};
  static constexpr char const* kProjectors[] = {"R_{A0}B0=0", "R_{A2}C2=0", "R_{A3}C3=0",
                                                "R_{A00}C00L_{B00}=0"};
  for (char const* name : kEntries) result.report.entries.push_back(full.report.entry(name));
  for (char const* name : kProjectors) {
    result.report.projector_conditions.push_back(full.report.projector(name));
  }
  result.report.rank_verdict = full.report.rank_verdict;
  result.report.projector_verdict = full.report.projector_verdict;

  auto& out = result.outcome;
  out.solvable = full.outcome.solvable;
  out.conditions = full.outcome.conditions;
  out.failed_conditions = full.outcome.failed_conditions;
  if (out.solvable) {
    out.particular = eta_symmetrize(*full.outcome.particular, eta);
    out.sample = [inner = full.outcome.sample, eta](std::uint64_t seed, double s) {
      return eta_symmetrize(inner(seed, s), eta);
    };
  }
  return result;
}

template <typename Scalar>
double verify_residual_ax_b(DualQuatMatrix<Scalar> const& a, DualQuatMatrix<Scalar> const& b,
                            DualQuatMatrix<Scalar> const& x) {
  if (a.cols() != x.rows() || a.rows() != b.rows() || x.cols() != b.cols()) {
    throw ShapeError("AX=B residual: A " + shape_string(a.std_part) + ", X " +
                     shape_string(x.std_part) + ", B " + shape_string(b.std_part));
  }
  return static_cast<double>((a * x - b).norm());
}

template <typename Scalar>
double verify_residual_xc_d(DualQuatMatrix<Scalar> const& c, DualQuatMatrix<Scalar> const& d,
                            DualQuatMatrix<Scalar> const& x) {
  if (x.cols() != c.rows() || x.rows() != d.rows() || c.cols() != d.cols()) {
    throw ShapeError("XC=D residual: X " + shape_string(x.std_part) + ", C " +
                     shape_string(c.std_part) + ", D " + shape_string(d.std_part));
  }
  return static_cast<double>((x * c - d).norm());
}

}  // namespace dqm
