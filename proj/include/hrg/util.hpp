#pragma once

#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hrg {

// File-system failures (missing inputs, unwritable outputs).
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Parse error with 1-based line (and column, when known) of the offending input.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string message, int line, int column = 0)
      : std::runtime_error(column > 0
                               ? "line " + std::to_string(line) + ", col " +
                                     std::to_string(column) + ": " + message
                               : "line " + std::to_string(line) + ": " + message),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

// Shortest-exact formatting for doubles (17 significant digits round-trips).
inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string format_fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view content);

std::vector<std::string_view> split_whitespace(std::string_view line);

// Unordered-pair key for hash sets of vertex pairs.
inline std::uint64_t pair_key(int i, int j) {
  if (i > j) std::swap(i, j);
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(i)) << 32) |
         static_cast<std::uint32_t>(j);
}

}  // namespace hrg
