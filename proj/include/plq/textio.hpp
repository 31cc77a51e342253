#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "plq/plmap.hpp"

namespace plq::textio {
namespace detail {

struct Token {
  std::string_view text;
  int column = 0;  // 1-based byte offset in the line
};

// Strips the comment and splits on blanks.  Tab and space both separate.
inline std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  std::size_t limit = line.find('#');
  if (limit == std::string_view::npos) limit = line.size();
  std::size_t i = 0;
  while (i < limit) {
    if (line[i] == ' ' || line[i] == '\t') {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < limit && line[j] != ' ' && line[j] != '\t') ++j;
    out.push_back({line.substr(i, j - i), static_cast<int>(i) + 1});
    i = j;
  }
  return out;
}

}  // namespace detail

// Reads a map from the line-oriented text form:
//
//   plmap v1
//   piece <endpoint> <slope>      # zero or more finite pieces
//   tail slope <slope>            # or:
//   tail geometric <base>
//    piece <endpoint> <slope>     # one period, any indentation
//   end
//
// Numbers are integers or fractions p/q; '#' starts a comment.  Errors carry
// the offending line and column.
inline PLMap parse(std::string_view text) {
  RawMap raw;
  enum class State { header, body, pattern, done };
  State state = State::header;
  int line_no = 0;
  std::size_t pos = 0;

  auto need_rational = [](const detail::Token& t, int line) {
    auto q = try_parse_rational(t.text);
    if (!q)
      fail(Errc::SyntaxError,
           "malformed rational '" + std::string(t.text) + "'", line, t.column);
    return *q;
  };

  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(
        pos, (eol == std::string_view::npos ? text.size() : eol) - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    std::vector<detail::Token> toks = detail::tokenize(line);
    if (toks.empty()) continue;

    if (state == State::header) {
      if (toks.size() != 2 || toks[0].text != "plmap" || toks[1].text != "v1")
        fail(Errc::SyntaxError, "expected header 'plmap v1'", line_no,
             toks[0].column);
      state = State::body;
      continue;
    }
    if (state == State::done)
      fail(Errc::SyntaxError, "content after the map definition", line_no,
           toks[0].column);

    if (toks[0].text == "piece") {
      if (toks.size() != 3)
        fail(Errc::SyntaxError, "piece needs an endpoint and a slope", line_no,
             toks[0].column);
      RawPiece p{need_rational(toks[1], line_no),
                 need_rational(toks[2], line_no), line_no};
      (state == State::pattern ? raw.pattern : raw.pieces).push_back(
          std::move(p));
      continue;
    }
    if (toks[0].text == "tail" && state == State::body) {
      if (toks.size() == 3 && toks[1].text == "slope") {
        raw.tail_slope = need_rational(toks[2], line_no);
        raw.tail_line = line_no;
        state = State::done;
        continue;
      }
      if (toks.size() == 3 && toks[1].text == "geometric") {
        raw.tail_base = need_rational(toks[2], line_no);
        raw.tail_line = line_no;
        state = State::pattern;
        continue;
      }
      fail(Errc::SyntaxError,
           "tail must be 'tail slope <s>' or 'tail geometric <base>'", line_no,
           toks[0].column);
    }
    if (toks[0].text == "end" && state == State::pattern) {
      if (toks.size() != 1)
        fail(Errc::SyntaxError, "'end' takes nothing else", line_no,
             toks[1].column);
      state = State::done;
      continue;
    }
    fail(Errc::SyntaxError,
         "unexpected directive '" + std::string(toks[0].text) + "'", line_no,
         toks[0].column);
  }

  if (state == State::header)
    fail(Errc::SyntaxError, "document has no 'plmap v1' header", 1);
  if (state == State::pattern)
    fail(Errc::SyntaxError, "geometric pattern never closed with 'end'",
         line_no);
  if (state == State::body)
    fail(Errc::SyntaxError, "document ends before a tail line", line_no);
  return validate(raw);
}

// Canonical text form: lowest-term rationals, single spaces, LF endings, one
// leading space on pattern lines, trailing newline.  Parsing and reserializing
// any output reproduces it byte for byte.
inline std::string serialize(const PLMap& f) {
  std::string out = "plmap v1\n";
  for (std::size_t i = 0; i + 1 < f.bps.size(); ++i) {
    out += "piece ";
    out += to_string(f.bps[i + 1]);
    out += ' ';
    out += to_string(f.slopes[i]);
    out += '\n';
  }
  if (const AffineTail* a = f.affine_tail()) {
    out += "tail slope ";
    out += to_string(a->slope);
    out += '\n';
    return out;
  }
  const GeometricTail& t = *f.geometric_tail();
  out += "tail geometric ";
  out += to_string(t.base);
  out += '\n';
  for (std::size_t i = 0; i + 1 < t.bps.size(); ++i) {
    out += " piece ";
    out += to_string(t.bps[i + 1]);
    out += ' ';
    out += to_string(t.slopes[i]);
    out += '\n';
  }
  out += "end\n";
  return out;
}

}  // namespace plq::textio
