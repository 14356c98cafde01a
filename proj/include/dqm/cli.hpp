#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dqm::cli {

/// Exit codes of the dqsolve tool.
enum ExitCode : int {
  kSolved = 0,      // solvable / verified / all conditions pass
  kUsageError = 1,  // bad flags, unreadable or malformed input, internal inconsistency
  kUnsolvable = 2,  // unsolvable, or residual above tolerance
};

/// Runs `dqsolve` with `args` (program name excluded). Never throws.
int run(std::vector<std::string> const& args, std::ostream& out, std::ostream& err);

}  // namespace dqm::cli
