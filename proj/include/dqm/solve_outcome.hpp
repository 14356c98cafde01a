#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "dqm/quat_matrix.hpp"

namespace dqm {

/// Raised when the projector and rank condition families disagree. The two
/// families are provably equivalent, so this always means the tolerances are
/// inconsistent with the data.
class ConditionFamilyDisagreement : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller-side precondition failed (distinct from "no solution exists").
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class ConditionMode { projector, rank, both };

inline ConditionMode mode_from_string(std::string const& s) {
  if (s == "projector") return ConditionMode::projector;
  if (s == "rank") return ConditionMode::rank;
  if (s == "both") return ConditionMode::both;
  throw std::invalid_argument("mode must be projector, rank or both (got '" + s + "')");
}

/// One "M = 0" test: passes when residual <= threshold.
struct ConditionCheck {
  std::string name;
  double residual = 0.0;
  double threshold = 0.0;
  bool passed = false;
};

template <typename Solution>
struct SolveOutcome {
  bool solvable = false;
  std::vector<ConditionCheck> conditions;
  std::vector<std::string> failed_conditions;
  std::optional<Solution> particular;
  /// General-solution instance for the given seed, free parameters drawn
  /// uniformly from [-scale, scale] per coefficient. Empty when unsolvable.
  std::function<Solution(std::uint64_t seed, double scale)> sample;
};

/// Deterministic source of free parameters. Each quaternion coefficient is an
/// independent uniform draw in [-scale, scale] built from the top 53 bits of
/// a mt19937_64 word, so the sequence is identical on every platform.
class ParameterDraw {
 public:
  ParameterDraw(std::uint64_t seed, double scale) : engine_(seed), scale_(scale) {}

  template <typename Scalar = double>
  QuatMatrix<Scalar> matrix(Eigen::Index rows, Eigen::Index cols) {
    QuatMatrix<Scalar> m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
      for (Eigen::Index c = 0; c < cols; ++c) {
        Scalar const w = next(), x = next(), y = next(), z = next();
        m.set(r, c, {w, x, y, z});
      }
    }
    return m;
  }

 private:
  double next() {
    double const u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return scale_ * (2.0 * u - 1.0);
  }

  std::mt19937_64 engine_;
  double scale_;
};

namespace detail {

template <typename Scalar>
ConditionCheck zero_check(std::string name, QuatMatrix<Scalar> const& m, double operand_scale,
                          Tolerance const& tol) {
  ConditionCheck c;
  c.name = std::move(name);
  c.residual = static_cast<double>(m.norm());
  c.threshold = tol.zero_abs * (1.0 + operand_scale);
  c.passed = c.residual <= c.threshold;
  return c;
}

inline std::vector<std::string> failed_names(std::vector<ConditionCheck> const& checks) {
  std::vector<std::string> out;
  for (auto const& c : checks) {
    if (!c.passed) out.push_back(c.name);
  }
  return out;
}

inline bool all_passed(std::vector<ConditionCheck> const& checks) {
  for (auto const& c : checks) {
    if (!c.passed) return false;
  }
  return true;
}

}  // namespace detail

}  // namespace dqm
