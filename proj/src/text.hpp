#pragma once

// Line-oriented tokenizing shared by the diagram file parsers.

#include "fmp/error.hpp"

#include <cctype>
#include <charconv>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace fmp::text {

struct Line {
  int number = 0;
  std::vector<std::string> tokens;
};

/// Reads non-empty lines, dropping `c` comment lines.
inline std::vector<Line> read_lines(std::istream &in) {
  std::vector<Line> out;
  std::string raw;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    Line line{number, {}};
    size_t i = 0;
    while (i < raw.size()) {
      while (i < raw.size() && std::isspace(static_cast<unsigned char>(raw[i])))
        ++i;
      size_t j = i;
      while (j < raw.size() && !std::isspace(static_cast<unsigned char>(raw[j])))
        ++j;
      if (j > i)
        line.tokens.emplace_back(raw.substr(i, j - i));
      i = j;
    }
    if (line.tokens.empty() || line.tokens[0] == "c")
      continue;
    out.push_back(std::move(line));
  }
  return out;
}

inline int to_int(std::string_view token, int line) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size())
    throw ParseError(ParseIssue::Malformed, line,
                     "expected an integer, got '" + std::string(token) + "'");
  return value;
}

inline void expect_arity(const Line &line, size_t n) {
  if (line.tokens.size() != n)
    throw ParseError(ParseIssue::Malformed, line.number,
                     "expected " + std::to_string(n) + " fields after '" +
                         line.tokens[0] + "'");
}

inline void expect_min_arity(const Line &line, size_t n) {
  if (line.tokens.size() < n)
    throw ParseError(ParseIssue::Malformed, line.number,
                     "too few fields after '" + line.tokens[0] + "'");
}

} // namespace fmp::text
