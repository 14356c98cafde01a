#pragma once

// Plain-text `.dqm` matrix files.
//
//   # comment
//   dqmatrix <rows> <cols>
//   (<w> <x> <y> <z>)                          standard part only
//   (<w> <x> <y> <z> | <w'> <x'> <y'> <z'>)    standard | infinitesimal
//
// One entry per line, row-major. `#` starts a comment anywhere on a line and
// blank lines are ignored.

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dqm/dual_quat_matrix.hpp"

namespace dqm::io {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::string const& source, int line, int column, std::string const& message);

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

DualQuatMatrix<double> parse_dqm(std::string_view text, std::string const& source = "<input>");

DualQuatMatrix<double> read_dqm_file(std::filesystem::path const& path);

/// Coefficients are written with 17 significant digits, so parsing the
/// result reproduces the matrix exactly. The infinitesimal part is omitted
/// when it is identically zero.
std::string render_dqm(DualQuatMatrix<double> const& m,
                       std::vector<std::string> const& comments = {});

void write_dqm_file(std::filesystem::path const& path, DualQuatMatrix<double> const& m,
                    std::vector<std::string> const& comments = {});

}  // namespace dqm::io
