#include "dqm/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>

#include "dqm/dqm.hpp"
#include "dqm/io.hpp"

namespace dqm::cli {
namespace {

using DM = DualQuatMatrix<double>;

enum class Kind { system, ax_b, xc_d };

char const* kind_name(Kind k) {
  switch (k) {
    case Kind::system: return "system";
    case Kind::ax_b: return "ax-b";
    case Kind::xc_d: return "xc-d";
  }
  return "?";
}

struct Options {
  std::string a, b, c, d, x, out;
  double tol = Tolerance{}.zero_abs;
  double rank_tol = Tolerance{}.rank_rel;
  std::string mode = "both";
  std::string eta;
  std::size_t n = 1;
  std::uint64_t seed = 0;
  double scale = 1.0;

  Tolerance tolerance() const {
    Tolerance t;
    t.zero_abs = tol;
    t.rank_rel = rank_tol;
    return t;
  }
  std::optional<EtaAxis> eta_axis() const {
    if (eta.empty()) return std::nullopt;
    return eta_from_string(eta);
  }
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

struct Inputs {
  std::optional<DM> a, b, c, d;
};

Inputs load(Kind kind, Options const& o) {
  auto need = [](std::string const& path, char const* flag) {
    if (path.empty()) throw UsageError(std::string("missing required flag ") + flag);
    return io::read_dqm_file(path);
  };
  Inputs in;
  if (kind != Kind::xc_d) {
    in.a = need(o.a, "--A");
    in.b = need(o.b, "--B");
  }
  if (kind != Kind::ax_b) {
    in.c = need(o.c, "--C");
    in.d = need(o.d, "--D");
  }
  return in;
}

// verify and sample take the same input flags as solve; the equation is
// inferred from which of them are present.
Kind infer_kind(Options const& o) {
  bool const ab = !o.a.empty() || !o.b.empty();
  bool const cd = !o.c.empty() || !o.d.empty();
  if (ab && cd) return Kind::system;
  if (ab) return Kind::ax_b;
  if (cd) return Kind::xc_d;
  throw UsageError("no input matrices given (use --A/--B and/or --C/--D)");
}

struct Verdict {
  bool solvable = false;
  std::vector<ConditionCheck> conditions;
  std::optional<DM> particular;
  std::function<DM(std::uint64_t, double)> sample;
  RankReport report;
};

template <typename Outcome>
Verdict to_verdict(Outcome const& outcome, RankReport report) {
  return {outcome.solvable, outcome.conditions, outcome.particular, outcome.sample,
          std::move(report)};
}

Verdict run_solver(Kind kind, Options const& o) {
  if (!o.eta.empty() && kind != Kind::ax_b) {
    throw UsageError("--eta applies to ax-b only");
  }
  Inputs const in = load(kind, o);
  Tolerance const tol = o.tolerance();
  ConditionMode const mode = mode_from_string(o.mode);
  switch (kind) {
    case Kind::system: {
      auto r = solve_dual_system(*in.a, *in.b, *in.c, *in.d, tol, mode);
      return to_verdict(r.outcome, std::move(r.report));
    }
    case Kind::ax_b: {
      if (auto const eta = o.eta_axis()) {
        auto r = solve_ax_b_eta_hermitian(*in.a, *in.b, *eta, tol, mode);
        return to_verdict(r.outcome, std::move(r.report));
      }
      auto r = solve_ax_b(*in.a, *in.b, tol, mode);
      return to_verdict(r.outcome, std::move(r.report));
    }
    case Kind::xc_d: {
      auto r = solve_xc_d(*in.c, *in.d, tol, mode);
      return to_verdict(r.outcome, std::move(r.report));
    }
  }
  throw std::logic_error("unreachable");
}

std::string equation_label(Kind kind, Options const& o) {
  std::string s = kind_name(kind);
  if (!o.eta.empty()) s += " (" + o.eta + "-Hermitian)";
  return s;
}

std::vector<std::string> provenance(Kind kind, Options const& o, Verdict const& v,
                                    std::string const& seed) {
  std::vector<std::string> lines;
  lines.push_back("dqsolve " + equation_label(kind, o));
  lines.push_back("seed: " + seed);
  lines.push_back("tol: " + sci(o.tol) + "  rank-tol: " + sci(o.rank_tol) + "  mode: " + o.mode);
  lines.push_back(std::string("verdict: ") + (v.solvable ? "solvable" : "unsolvable"));
  for (auto const& c : v.conditions) {
    lines.push_back(pad(c.name, 22) + (c.passed ? "PASS" : "FAIL"));
  }
  return lines;
}

int cmd_solve(Kind kind, Options const& o, std::ostream& out) {
  Verdict const v = run_solver(kind, o);
  auto const header = provenance(kind, o, v, "canonical (free parameters zero)");
  if (!v.solvable) {
    for (auto const& line : header) out << "# " << line << "\n";
    return kUnsolvable;
  }
  if (o.out.empty()) {
    out << io::render_dqm(*v.particular, header);
  } else {
    io::write_dqm_file(o.out, *v.particular, header);
    for (auto const& line : header) out << "# " << line << "\n";
    out << "# solution written to " << o.out << "\n";
  }
  return kSolved;
}

void print_report(RankReport const& report, std::ostream& out) {
  out << pad("condition", 22) << pad("lhs", 12) << pad("rhs", 12) << "result\n";
  for (auto const& e : report.entries) {
    bool const ranks = e.kind == RankEntry::Kind::rank_equality;
    out << pad(e.name, 22) << pad(ranks ? std::to_string(e.lhs_rank) : sci(e.residual), 12)
        << pad(ranks ? std::to_string(e.rhs_rank) : "<=" + sci(e.threshold), 12)
        << (e.passed ? "PASS" : "FAIL") << "\n";
  }
  out << "\n" << pad("projector condition", 22) << pad("residual", 12) << pad("threshold", 12)
      << "result\n";
  for (auto const& c : report.projector_conditions) {
    out << pad(c.name, 22) << pad(sci(c.residual), 12) << pad(sci(c.threshold), 12)
        << (c.passed ? "PASS" : "FAIL") << "\n";
  }
  out << "\nrank verdict: " << (report.rank_verdict ? "PASS" : "FAIL")
      << "\nprojector verdict: " << (report.projector_verdict ? "PASS" : "FAIL") << "\n";
}

int cmd_check(Kind kind, Options const& o, std::ostream& out) {
  Verdict const v = run_solver(kind, o);
  out << "equation: " << equation_label(kind, o) << "\n";
  print_report(v.report, out);
  out << "verdict: " << (v.solvable ? "solvable" : "unsolvable") << "\n";
  return v.solvable ? kSolved : kUnsolvable;
}

int cmd_verify(Options const& o, std::ostream& out) {
  if (o.x.empty()) throw UsageError("missing required flag --X");
  Kind const kind = infer_kind(o);
  Inputs const in = load(kind, o);
  DM const x = io::read_dqm_file(o.x);
  double scale = 0.0;
  for (auto const* m : {&in.a, &in.b, &in.c, &in.d}) {
    if (*m) scale += (*m)->norm();
  }
  double const threshold = o.tol * (1.0 + scale);
  bool ok = true;
  out << "equation: " << kind_name(kind) << "\n";
  if (in.a) {
    double const r = verify_residual_ax_b(*in.a, *in.b, x);
    out << pad("residual ||AX-B||", 22) << sci(r) << "\n";
    ok = ok && r <= threshold;
  }
  if (in.c) {
    double const r = verify_residual_xc_d(*in.c, *in.d, x);
    out << pad("residual ||XC-D||", 22) << sci(r) << "\n";
    ok = ok && r <= threshold;
  }
  if (auto const eta = o.eta_axis()) {
    bool const herm = x.is_square() && is_eta_hermitian(x, *eta, o.tolerance());
    out << pad(std::string(1, to_char(*eta)) + "-Hermitian X", 22) << (herm ? "yes" : "no") << "\n";
    ok = ok && herm;
  }
  out << pad("threshold", 22) << sci(threshold) << "\n";
  out << "verdict: " << (ok ? "verified" : "rejected") << "\n";
  return ok ? kSolved : kUnsolvable;
}

int cmd_sample(Options const& o, std::ostream& out) {
  Kind const kind = infer_kind(o);
  Verdict const v = run_solver(kind, o);
  if (!v.solvable) {
    for (auto const& line : provenance(kind, o, v, "n/a")) out << "# " << line << "\n";
    return kUnsolvable;
  }
  for (std::size_t i = 0; i < o.n; ++i) {
    std::uint64_t const seed = o.seed + i;
    auto header = provenance(kind, o, v, std::to_string(seed));
    header.insert(header.begin() + 1, "sample " + std::to_string(i + 1) + " of " +
                                          std::to_string(o.n) + ", scale " + sci(o.scale));
    DM const x = v.sample(seed, o.scale);
    if (o.out.empty()) {
      out << io::render_dqm(x, header);
    } else {
      std::string const path = o.out + "_" + std::to_string(i) + ".dqm";
      io::write_dqm_file(path, x, header);
      out << "# sample " << i << " (seed " << seed << ") written to " << path << "\n";
    }
  }
  return kSolved;
}

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--tol", o.tol, "residual tolerance: ||M|| <= tol*(1+scale) counts as zero")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--rank-tol", o.rank_tol, "relative singular-value cutoff")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--mode", o.mode, "condition family deciding solvability")
      ->capture_default_str()
      ->check(CLI::IsMember({"projector", "rank", "both"}));
}

void add_inputs(CLI::App* cmd, Options& o, bool ab, bool cd, bool eta) {
  if (ab) {
    cmd->add_option("--A", o.a, "matrix A (.dqm)");
    cmd->add_option("--B", o.b, "matrix B (.dqm)");
  }
  if (cd) {
    cmd->add_option("--C", o.c, "matrix C (.dqm)");
    cmd->add_option("--D", o.d, "matrix D (.dqm)");
  }
  if (eta) {
    cmd->add_option("--eta", o.eta, "eta-Hermitian solutions of AX=B (i, j or k)")
        ->check(CLI::IsMember({"i", "j", "k"}));
  }
}

}  // namespace

int run(std::vector<std::string> const& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Solvability and general solutions of dual quaternion matrix equations "
               "AX=B, XC=D.",
               "dqsolve"};
  app.require_subcommand(1);

  std::optional<Kind> solve_kind, check_kind;
  CLI::App* solve = app.add_subcommand("solve", "print the verdict and the canonical solution");
  CLI::App* check = app.add_subcommand("check", "print the rank and projector condition table");
  solve->require_subcommand(1);
  check->require_subcommand(1);
  for (auto [parent, target] : {std::pair{solve, &solve_kind}, std::pair{check, &check_kind}}) {
    for (Kind k : {Kind::system, Kind::ax_b, Kind::xc_d}) {
      CLI::App* sub = parent->add_subcommand(kind_name(k));
      add_inputs(sub, o, k != Kind::xc_d, k != Kind::ax_b, k == Kind::ax_b);
      add_common(sub, o);
      if (parent == solve) sub->add_option("--out", o.out, "write the solution to this file");
      sub->callback([target = target, k] { *target = k; });
    }
  }

  CLI::App* verify = app.add_subcommand("verify", "residuals of a candidate solution X");
  verify->add_option("--X", o.x, "candidate solution (.dqm)")->required();
  add_inputs(verify, o, true, true, true);
  add_common(verify, o);

  CLI::App* sample = app.add_subcommand("sample", "write seeded general-solution instances");
  sample->add_option("--n", o.n, "number of instances")->capture_default_str();
  sample->add_option("--seed", o.seed, "seed of the first instance (instance i uses seed+i)")
      ->capture_default_str();
  sample->add_option("--scale", o.scale, "free parameters are uniform in [-scale, scale]")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  sample->add_option("--out", o.out, "write instance i to <out>_<i>.dqm");
  add_inputs(sample, o, true, true, true);
  add_common(sample, o);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (CLI::ParseError const& e) {
    int const code = app.exit(e, out, err);
    return code == 0 ? kSolved : kUsageError;
  }

  try {
    if (solve_kind) return cmd_solve(*solve_kind, o, out);
    if (check_kind) return cmd_check(*check_kind, o, out);
    if (verify->parsed()) return cmd_verify(o, out);
    if (sample->parsed()) return cmd_sample(o, out);
  } catch (io::ParseError const& e) {
    err << "parse error: " << e.what() << "\n";
    return kUsageError;
  } catch (ConditionFamilyDisagreement const& e) {
    err << "internal inconsistency: " << e.what() << "\n";
    return kUsageError;
  } catch (std::exception const& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }
  err << app.help();
  return kUsageError;
}

}  // namespace dqm::cli
