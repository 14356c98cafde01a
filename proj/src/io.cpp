#include "dqm/io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace dqm::io {

ParseError::ParseError(std::string const& source, int line, int column, std::string const& message)
    : std::runtime_error(source + ":" + std::to_string(line) + ":" + std::to_string(column) +
                         ": " + message),
      line_(line),
      column_(column) {}

namespace {

struct Line {
  int number;
  std::string_view text;  // comment stripped
};

class LineCursor {
 public:
  LineCursor(std::string const& source, Line line) : source_(source), line_(line) {}

  void skip_space() {
    while (pos_ < line_.text.size() && std::isspace(static_cast<unsigned char>(line_.text[pos_]))) {
      ++pos_;
    }
  }

  bool at_end() {
    skip_space();
    return pos_ >= line_.text.size();
  }

  int column() const { return static_cast<int>(pos_) + 1; }

  [[noreturn]] void fail(std::string const& message) const {
    throw ParseError(source_, line_.number, column(), message);
  }

  void expect(char c) {
    skip_space();
    if (pos_ >= line_.text.size() || line_.text[pos_] != c) {
      fail(std::string("expected '") + c + "'");
    }
    ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < line_.text.size() && line_.text[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  std::string_view word() {
    skip_space();
    std::size_t const start = pos_;
    while (pos_ < line_.text.size() &&
           !std::isspace(static_cast<unsigned char>(line_.text[pos_])) &&
           line_.text[pos_] != '(' && line_.text[pos_] != ')' && line_.text[pos_] != '|') {
      ++pos_;
    }
    return line_.text.substr(start, pos_ - start);
  }

  double number() {
    skip_space();
    std::size_t const start = pos_;
    std::string_view const token = word();
    if (token.empty()) {
      pos_ = start;
      fail("expected a coefficient");
    }
    double value = 0.0;
    char const* first = token.data();
    if (*first == '+') ++first;
    auto const [end, ec] = std::from_chars(first, token.data() + token.size(), value);
    if (ec != std::errc() || end != token.data() + token.size()) {
      pos_ = start;
      fail("non-numeric coefficient '" + std::string(token) + "'");
    }
    if (!std::isfinite(value)) {
      pos_ = start;
      fail("non-finite coefficient '" + std::string(token) + "'");
    }
    return value;
  }

  long positive_integer(char const* what) {
    skip_space();
    std::size_t const start = pos_;
    std::string_view const token = word();
    long value = 0;
    auto const [end, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (token.empty() || ec != std::errc() || end != token.data() + token.size() || value <= 0) {
      pos_ = start;
      fail(std::string(what) + " must be a positive integer, got '" + std::string(token) + "'");
    }
    return value;
  }

 private:
  std::string const& source_;
  Line line_;
  std::size_t pos_ = 0;
};

std::vector<Line> significant_lines(std::string_view text) {
  std::vector<Line> out;
  int number = 0;
  while (!text.empty()) {
    ++number;
    std::size_t const eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    if (auto const hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    bool blank = true;
    for (char ch : line) blank = blank && std::isspace(static_cast<unsigned char>(ch));
    if (!blank) out.push_back({number, line});
  }
  return out;
}

Quaternion<double> read_quaternion(LineCursor& cursor) {
  double const w = cursor.number();
  double const x = cursor.number();
  double const y = cursor.number();
  double const z = cursor.number();
  return {w, x, y, z};
}

}  // namespace

DualQuatMatrix<double> parse_dqm(std::string_view text, std::string const& source) {
  auto const lines = significant_lines(text);
  if (lines.empty()) throw ParseError(source, 1, 1, "missing 'dqmatrix <rows> <cols>' header");

  LineCursor header(source, lines.front());
  if (header.word() != "dqmatrix") {
    throw ParseError(source, lines.front().number, 1,
                     "malformed header, expected 'dqmatrix <rows> <cols>'");
  }
  long const rows = header.positive_integer("row count");
  long const cols = header.positive_integer("column count");
  if (!header.at_end()) header.fail("trailing characters after header");

  std::size_t const expected = static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
  std::size_t const found = lines.size() - 1;
  if (found != expected) {
    int const line = found > expected ? lines[expected + 1].number : lines.front().number;
    throw ParseError(source, line, 1,
                     "entry count mismatch: header declares " + std::to_string(rows) + "x" +
                         std::to_string(cols) + " = " + std::to_string(expected) +
                         " entries, found " + std::to_string(found));
  }

  DualQuatMatrix<double> m(rows, cols);
  for (std::size_t e = 0; e < expected; ++e) {
    LineCursor cursor(source, lines[e + 1]);
    cursor.expect('(');
    DualQuaternion<double> value;
    value.std_part = read_quaternion(cursor);
    if (cursor.accept('|')) value.inf_part = read_quaternion(cursor);
    cursor.expect(')');
    if (!cursor.at_end()) cursor.fail("trailing characters after entry");
    m.set(static_cast<Eigen::Index>(e) / cols, static_cast<Eigen::Index>(e) % cols, value);
  }
  return m;
}

DualQuatMatrix<double> read_dqm_file(std::filesystem::path const& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_dqm(buffer.str(), path.string());
}

std::string render_dqm(DualQuatMatrix<double> const& m, std::vector<std::string> const& comments) {
  std::string out;
  for (auto const& c : comments) out += "# " + c + "\n";
  out += "dqmatrix " + std::to_string(m.rows()) + " " + std::to_string(m.cols()) + "\n";
  bool const has_inf = (m.inf_part.simplex().array() != std::complex<double>(0.0)).any() ||
                       (m.inf_part.perplex().array() != std::complex<double>(0.0)).any();
  auto quaternion = [](Quaternion<double> const& q) {
    using detail::format_coefficient;
    return format_coefficient(q.w) + " " + format_coefficient(q.x) + " " +
           format_coefficient(q.y) + " " + format_coefficient(q.z);
  };
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      out += "(" + quaternion(m.std_part(r, c));
      if (has_inf) out += " | " + quaternion(m.inf_part(r, c));
      out += ")\n";
    }
  }
  return out;
}

void write_dqm_file(std::filesystem::path const& path, DualQuatMatrix<double> const& m,
                    std::vector<std::string> const& comments) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << render_dqm(m, comments);
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace dqm::io
