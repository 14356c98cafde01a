#pragma once

// The dual quaternion system  A X = B,  X C = D.
//
// Splitting into standard and infinitesimal parts gives four quaternion
// equations
//
//   A0 X0 = B0,   X0 C0 = D0,   A0 X1 + A1 X0 = B1,   X0 C1 + X1 C0 = D1.
//
// The first two fix X0 = X0' + L_{A0} U R_{C0} with X0' = A0^+ B0 + L_{A0} D0 C0^+.
// Substituting X0 into the last two yields the coupled system
//
//   A0 X1 + A11 U R_{C0} = B11,   X1 C0 + L_{A0} U C11 = D11,
//
// which is solved for (X1, U) by coupled_system_terms(). Solvability is
// reported twice: through projector conditions and through block rank
// equalities. The two families are equivalent and are cross-checked.

#include <memory>
#include <string>
#include <vector>

#include "dqm/dual_quat_matrix.hpp"
#include "dqm/solve_outcome.hpp"
#include "dqm/two_sided.hpp"

namespace dqm {

/// Named intermediate matrices of the dual-system construction.
template <typename Scalar = double>
struct IntermediateLedger {
  using M = QuatMatrix<Scalar>;
  M b11, d11, a11, c11;
  M a2, b2, c2, a3, b3, c3;
  M a00, b00, c00, d00;
  M phi;

  /// Throws std::logic_error unless every matrix has the shape implied by
  /// A: m x n, B: m x k, C: k x l, D: n x l.
  void check_shapes(Eigen::Index m, Eigen::Index n, Eigen::Index k, Eigen::Index l) const {
    struct Expect {
      char const* name;
      M const* mat;
      Eigen::Index rows, cols;
    };
    Expect const expected[] = {
        {"B11", &b11, m, k}, {"D11", &d11, n, l}, {"A11", &a11, m, n}, {"C11", &c11, k, l},
        {"A2", &a2, m, n},   {"B2", &b2, k, k},   {"C2", &c2, m, k},   {"A3", &a3, n, n},
        {"B3", &b3, k, l},   {"C3", &c3, n, l},   {"A00", &a00, n, n}, {"B00", &b00, k, l},
        {"C00", &c00, n, l}, {"D00", &d00, n, n}, {"Phi", &phi, n, k}};
    for (auto const& e : expected) {
      if (e.mat->rows() != e.rows || e.mat->cols() != e.cols) {
        throw std::logic_error(std::string("ledger matrix ") + e.name + " is " +
                               shape_string(*e.mat) + ", expected " + std::to_string(e.rows) +
                               "x" + std::to_string(e.cols));
      }
    }
  }
};

/// One line of the rank report. Rank entries compare two ranks; matrix
/// equality entries compare ||lhs - rhs|| against a threshold.
struct RankEntry {
  enum class Kind { matrix_equality, rank_equality };
  std::string name;
  Kind kind = Kind::rank_equality;
  Eigen::Index lhs_rank = 0;
  Eigen::Index rhs_rank = 0;
  double residual = 0.0;
  double threshold = 0.0;
  bool passed = false;
};

struct RankReport {
  /// EQ-AD=BC, EQ-DUALCOMPAT, RC1..RC7 in that order.
  std::vector<RankEntry> entries;
  /// Projector-form conditions, evaluated on the same input.
  std::vector<ConditionCheck> projector_conditions;
  bool rank_verdict = false;
  bool projector_verdict = false;

  RankEntry const& entry(std::string const& name) const {
    for (auto const& e : entries) {
      if (e.name == name) return e;
    }
    throw std::out_of_range("no rank report entry named " + name);
  }

  ConditionCheck const& projector(std::string const& name) const {
    for (auto const& c : projector_conditions) {
      if (c.name == name) return c;
    }
    throw std::out_of_range("no projector condition named " + name);
  }
};

template <typename Scalar = double>
struct DualSystemResult {
  SolveOutcome<DualQuatMatrix<Scalar>> outcome;
  RankReport report;
  IntermediateLedger<Scalar> ledger;
};

namespace detail {

template <typename Scalar>
void check_dual_system_shapes(DualQuatMatrix<Scalar> const& a, DualQuatMatrix<Scalar> const& b,
                              DualQuatMatrix<Scalar> const& c, DualQuatMatrix<Scalar> const& d) {
  if (b.rows() != a.rows() || c.rows() != b.cols() || d.rows() != a.cols() ||
      d.cols() != c.cols()) {
    throw ShapeError("AX=B, XC=D needs A: m x n, B: m x k, C: k x l, D: n x l; got A " +
                     shape_string(a.std_part) + ", B " + shape_string(b.std_part) + ", C " +
                     shape_string(c.std_part) + ", D " + shape_string(d.std_part));
  }
}

template <typename Scalar>
RankEntry rank_equality(std::string name, QuatMatrix<Scalar> const& lhs, Eigen::Index rhs_rank,
                        Tolerance const& tol) {
  RankEntry e;
  e.name = std::move(name);
  e.kind = RankEntry::Kind::rank_equality;
  e.lhs_rank = rank(lhs, tol);
  e.rhs_rank = rhs_rank;
  e.passed = e.lhs_rank == e.rhs_rank;
  return e;
}

template <typename Scalar>
RankEntry matrix_equality(std::string name, QuatMatrix<Scalar> const& lhs,
                          QuatMatrix<Scalar> const& rhs, double operand_scale,
                          Tolerance const& tol) {
  RankEntry e;
  e.name = std::move(name);
  e.kind = RankEntry::Kind::matrix_equality;
  e.residual = static_cast<double>((lhs - rhs).norm());
  e.threshold = tol.zero_abs * (1.0 + operand_scale);
  e.passed = e.residual <= e.threshold;
  return e;
}

template <typename Scalar>
double input_scale(DualQuatMatrix<Scalar> const& a, DualQuatMatrix<Scalar> const& b,
                   DualQuatMatrix<Scalar> const& c, DualQuatMatrix<Scalar> const& d) {
  return static_cast<double>(a.norm() + b.norm() + c.norm() + d.norm());
}

// The two matrix equalities A0 D0 = B0 C0 and A0 D1 - B0 C1 = B1 C0 - A1 D0.
template <typename Scalar>
std::vector<RankEntry> compatibility_equalities(DualQuatMatrix<Scalar> const& a,
                                                DualQuatMatrix<Scalar> const& b,
                                                DualQuatMatrix<Scalar> const& c,
                                                DualQuatMatrix<Scalar> const& d,
                                                Tolerance const& tol, double scale) {
  auto const &a0 = a.std_part, &a1 = a.inf_part, &b0 = b.std_part, &b1 = b.inf_part;
  auto const &c0 = c.std_part, &c1 = c.inf_part, &d0 = d.std_part, &d1 = d.inf_part;
  double const prod = static_cast<double>(a.norm() * d.norm() + b.norm() * c.norm());
  return {matrix_equality("EQ-AD=BC", a0 * d0, b0 * c0, scale + prod, tol),
          matrix_equality("EQ-DUALCOMPAT", a0 * d1 - b0 * c1, b1 * c0 - a1 * d0, scale + 2 * prod,
                          tol)};
}

// RC1..RC7, with the block matrices assembled literally.
template <typename Scalar>
std::vector<RankEntry> rank_equalities(DualQuatMatrix<Scalar> const& a,
                                       DualQuatMatrix<Scalar> const& b,
                                       DualQuatMatrix<Scalar> const& c,
                                       DualQuatMatrix<Scalar> const& d, Tolerance const& tol) {
  using M = QuatMatrix<Scalar>;
  auto const &a0 = a.std_part, &a1 = a.inf_part, &b0 = b.std_part, &b1 = b.inf_part;
  auto const &c0 = c.std_part, &c1 = c.inf_part, &d0 = d.std_part, &d1 = d.inf_part;
  auto const zero = [](Eigen::Index r, Eigen::Index cc) { return M::Zero(r, cc); };
  Eigen::Index const m = a0.rows(), n = a0.cols(), k = c0.rows(), l = c0.cols();

  Eigen::Index const rank_a0 = rank(a0, tol);
  Eigen::Index const rank_c0 = rank(c0, tol);

  std::vector<RankEntry> out;
  out.push_back(rank_equality("RC1", hcat<Scalar>({a0, b0}), rank_a0, tol));
  out.push_back(rank_equality("RC2", vcat<Scalar>({c0, d0}), rank_c0, tol));
  out.push_back(rank_equality("RC3", blocks<Scalar>({{a0, b1, a1}, {zero(m, n), b0, a0}}),
                              rank(blocks<Scalar>({{a0, a1}, {zero(m, n), a0}}), tol), tol));
  out.push_back(rank_equality("RC4", hcat<Scalar>({a0, a1 * d0 - b1 * c0}), rank_a0, tol));
  out.push_back(rank_equality("RC5", vcat<Scalar>({c0, b0 * c1 - a0 * d1}), rank_c0, tol));
  out.push_back(rank_equality("RC6", blocks<Scalar>({{c0, zero(k, l)}, {d1, d0}, {c1, c0}}),
                              rank(blocks<Scalar>({{c0, zero(k, l)}, {c1, c0}}), tol), tol));
  out.push_back(rank_equality("RC7",
                              blocks<Scalar>({{b1 * c1 - a1 * d1, a0, b1 * c0 - a1 * d0},
                                              {c0, zero(k, n), zero(k, l)},
                                              {b0 * c1 - a0 * d1, zero(m, n), zero(m, l)}}),
                              rank_a0 + rank_c0, tol));
  return out;
}

}  // namespace detail

/// Rank-form solvability report for A X = B, X C = D. The projector-form
/// conditions are evaluated alongside for cross-checking.
template <typename Scalar>
RankReport rank_report(DualQuatMatrix<Scalar> const& a, DualQuatMatrix<Scalar> const& b,
                       DualQuatMatrix<Scalar> const& c, DualQuatMatrix<Scalar> const& d,
                       Tolerance const& tol = {});

namespace detail {

template <typename Scalar>
struct DualSystemTerms {
  using M = QuatMatrix<Scalar>;
  M a0_pinv, c0_pinv, l_a0, r_c0;
  M x0_base;  // A0^+ B0 + L_{A0} D0 C0^+
  CoupledSystemTerms<Scalar> coupled;
  std::vector<ConditionCheck> standard_conditions;  // R_{A0}B0=0, D0L_{C0}=0

  DualQuatMatrix<Scalar> assemble(M const& u, M const& u1) const {
    return {x0_base + l_a0 * u * r_c0, coupled.assemble_x(u, u1)};
  }

  IntermediateLedger<Scalar> ledger() const {
    auto const& p = coupled.pair;
    return {coupled.b, coupled.d, coupled.a1, coupled.c1, p.a2,  p.b2,  p.c2, p.a3,
            p.b3,      p.c3,      p.a00,      p.b00,      p.c00, p.d00, p.phi};
  }
};

template <typename Scalar>
DualSystemTerms<Scalar> dual_system_terms(DualQuatMatrix<Scalar> const& a,
                                          DualQuatMatrix<Scalar> const& b,
                                          DualQuatMatrix<Scalar> const& c,
                                          DualQuatMatrix<Scalar> const& d, Tolerance const& tol,
                                          double scale) {
  using M = QuatMatrix<Scalar>;
  auto const &a0 = a.std_part, &a1 = a.inf_part, &b0 = b.std_part, &b1 = b.inf_part;
  auto const &c0 = c.std_part, &c1 = c.inf_part, &d0 = d.std_part, &d1 = d.inf_part;

  M const a0_pinv = pinv(a0, tol);
  M const c0_pinv = pinv(c0, tol);
  M const l_a0 = M::Identity(a0.cols()) - a0_pinv * a0;
  M const r_a0 = M::Identity(a0.rows()) - a0 * a0_pinv;
  M const l_c0 = M::Identity(c0.cols()) - c0_pinv * c0;
  M const r_c0 = M::Identity(c0.rows()) - c0 * c0_pinv;

  std::vector<ConditionCheck> standard;
  standard.push_back(zero_check("R_{A0}B0=0", r_a0 * b0, scale + static_cast<double>(b0.norm()), tol));
  standard.push_back(zero_check("D0L_{C0}=0", d0 * l_c0, scale + static_cast<double>(d0.norm()), tol));

  M const x0_base = a0_pinv * b0 + l_a0 * d0 * c0_pinv;
  M const b11 = b1 - a1 * x0_base;
  M const d11 = d1 - x0_base * c1;
  M const a11 = a1 * l_a0;
  M const c11 = r_c0 * c1;

  auto coupled = coupled_system_terms<Scalar>(a0, a11, b11, c0, c11, d11, tol, scale);
  return {a0_pinv, c0_pinv, l_a0, r_c0, x0_base, std::move(coupled), std::move(standard)};
}

}  // namespace detail

namespace detail {

template <typename Scalar>
RankReport assemble_report(DualQuatMatrix<Scalar> const& a, DualQuatMatrix<Scalar> const& b,
                           DualQuatMatrix<Scalar> const& c, DualQuatMatrix<Scalar> const& d,
                           DualSystemTerms<Scalar> const& terms, Tolerance const& tol,
                           double scale) {
  RankReport report;
  report.entries = compatibility_equalities(a, b, c, d, tol, scale);
  auto ranks = rank_equalities(a, b, c, d, tol);
  report.entries.insert(report.entries.end(), ranks.begin(), ranks.end());

  report.projector_conditions = terms.standard_conditions;
  auto const& pair_conditions = terms.coupled.pair.conditions;
  report.projector_conditions.insert(report.projector_conditions.end(), pair_conditions.begin(),
                                     pair_conditions.end());

  bool const equalities_hold = report.entries[0].passed && report.entries[1].passed;
  report.projector_verdict = equalities_hold && all_passed(report.projector_conditions);
  report.rank_verdict = true;
  for (auto const& e : report.entries) report.rank_verdict = report.rank_verdict && e.passed;
  return report;
}

}  // namespace detail

template <typename Scalar>
RankReport rank_report(DualQuatMatrix<Scalar> const& a, DualQuatMatrix<Scalar> const& b,
                       DualQuatMatrix<Scalar> const& c, DualQuatMatrix<Scalar> const& d,
                       Tolerance const& tol) {
  tol.validate();
  detail::check_dual_system_shapes(a, b, c, d);
  double const scale = detail::input_scale(a, b, c, d);
  Tolerance const t = tol.scaled_to(scale);
  auto const terms = detail::dual_system_terms(a, b, c, d, t, scale);
  return detail::assemble_report(a, b, c, d, terms, t, scale);
}

/// Decides A X = B, X C = D over the dual quaternions and, when consistent,
/// returns the canonical particular solution (all free parameters zero) and
/// a seeded generator of the general solution.
///
/// With mode == both, a disagreement between the projector and rank
/// verdicts throws ConditionFamilyDisagreement.
template <typename Scalar>
DualSystemResult<Scalar> solve_dual_system(DualQuatMatrix<Scalar> const& a,
                                           DualQuatMatrix<Scalar> const& b,
                                           DualQuatMatrix<Scalar> const& c,
                                           DualQuatMatrix<Scalar> const& d,
                                           Tolerance const& tol = {},
                                           ConditionMode mode = ConditionMode::both) {
  tol.validate();
  detail::check_dual_system_shapes(a, b, c, d);
  double const scale = detail::input_scale(a, b, c, d);
  Tolerance const t = tol.scaled_to(scale);

  auto terms = std::make_shared<detail::DualSystemTerms<Scalar> const>(
      detail::dual_system_terms(a, b, c, d, t, scale));

  DualSystemResult<Scalar> result{{}, {}, terms->ledger()};
  result.ledger.check_shapes(a.rows(), a.cols(), c.rows(), c.cols());

  result.report = detail::assemble_report(a, b, c, d, *terms, t, scale);
  RankReport const& report = result.report;
  auto const& pair_conditions = terms->coupled.pair.conditions;

  if (mode == ConditionMode::both && report.projector_verdict != report.rank_verdict) {
    throw ConditionFamilyDisagreement(
        std::string("projector conditions ") + (report.projector_verdict ? "pass" : "fail") +
        " but rank conditions " + (report.rank_verdict ? "pass" : "fail") +
        "; adjust --tol / --rank-tol");
  }

  auto& out = result.outcome;
  // Standard-part conditions and the two equalities come first, then the
  // infinitesimal-part family (or families) selected by the mode.
  std::vector<ConditionCheck> ordered(terms->standard_conditions);
  for (std::size_t i = 0; i < 2; ++i) {
    auto const& e = report.entries[i];
    ordered.push_back({e.name, e.residual, e.threshold, e.passed});
  }
  if (mode != ConditionMode::rank) {
    ordered.insert(ordered.end(), pair_conditions.begin(), pair_conditions.end());
  }
  if (mode != ConditionMode::projector) {
    for (std::size_t i = 2; i < report.entries.size(); ++i) {
      auto const& e = report.entries[i];
      ordered.push_back({e.name, static_cast<double>(e.lhs_rank),
                         static_cast<double>(e.rhs_rank), e.passed});
    }
  }
  out.conditions = std::move(ordered);
  out.failed_conditions = detail::failed_names(out.conditions);
  out.solvable = mode == ConditionMode::rank ? report.rank_verdict : report.projector_verdict;

  if (out.solvable) {
    auto const& phi = terms->coupled.pair.phi;
    out.particular = terms->assemble(phi, QuatMatrix<Scalar>::Zero(phi.rows(), phi.cols()));
    out.sample = [terms](std::uint64_t seed, double s) {
      ParameterDraw draw(seed, s);
      auto const& coupled = terms->coupled;
      auto const u1 = draw.matrix<Scalar>(coupled.x_rows(), coupled.x_cols());
      auto const u = coupled.pair.sample(draw);
      return terms->assemble(u, u1);
    };
  }
  return result;
}

/// ||A X - B|| and ||X C - D|| (dual norms).
struct Residuals {
  double ax = 0.0;
  double xc = 0.0;
};

template <typename Scalar>
Residuals verify_residual(DualQuatMatrix<Scalar> const& a, DualQuatMatrix<Scalar> const& b,
                          DualQuatMatrix<Scalar> const& c, DualQuatMatrix<Scalar> const& d,
                          DualQuatMatrix<Scalar> const& x) {
  detail::check_dual_system_shapes(a, b, c, d);
  if (x.rows() != a.cols() || x.cols() != b.cols()) {
    throw ShapeError("candidate X is " + shape_string(x.std_part) + ", expected " +
                     std::to_string(a.cols()) + "x" + std::to_string(b.cols()));
  }
  return {static_cast<double>((a * x - b).norm()), static_cast<double>((x * c - d).norm())};
}

}  // namespace dqm
