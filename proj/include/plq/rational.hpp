#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>
#include <string_view>

#include "plq/error.hpp"

namespace plq {

// All arithmetic in the library runs on arbitrary-precision rationals kept in
// lowest terms with positive denominator; the backend guarantees both.
using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Integer num(const Rational& q) { return numerator(q); }
inline Integer den(const Rational& q) { return denominator(q); }

inline Rational rat(const Integer& n, const Integer& d) {
  if (d == 0) fail(Errc::DivisionByZero, "rational with zero denominator");
  return Rational(n, d);
}

inline Rational rat(long long n, long long d) {
  return rat(Integer(n), Integer(d));
}

inline Rational rabs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

// Largest integer <= q.  cpp_int division truncates toward zero, so negative
// non-integers need the extra step down.
inline Integer rfloor(const Rational& q) {
  Integer t = num(q) / den(q);
  if (q < 0 && t * den(q) != num(q)) --t;
  return t;
}

// q^k for integer k; q must be nonzero when k < 0.  The backend only defines
// pow for the integer type, so exponentiate numerator and denominator apart.
inline Rational rational_pow(const Rational& q, int k) {
  if (k == 0) return Rational(1);
  unsigned e = k < 0 ? unsigned(-(long long)k) : unsigned(k);
  Integer n = pow(num(q), e);
  Integer d = pow(den(q), e);
  if (k < 0) {
    if (n == 0) fail(Errc::DivisionByZero, "zero raised to a negative power");
    return rat(d, n);
  }
  return rat(n, d);
}

inline std::string to_string(const Rational& q) {
  std::string s = num(q).str();
  if (den(q) != 1) {
    s += '/';
    s += den(q).str();
  }
  return s;
}

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

// Fixed-point decimal rendering with the given number of fractional digits,
// rounding half away from zero.  Used only for presentation; never feeds back
// into arithmetic.
inline std::string to_decimal(const Rational& q, unsigned digits) {
  Integer p = num(q) < 0 ? Integer(-num(q)) : num(q);
  Integer d = den(q);
  Integer scale = pow(Integer(10), digits);
  Integer scaled = (p * scale * 2 + d) / (2 * d);
  Integer whole = scaled / scale;
  Integer frac = scaled % scale;
  std::string out = q < 0 && scaled != 0 ? "-" : "";
  out += whole.str();
  if (digits > 0) {
    std::string f = frac.str();
    out += '.';
    out += std::string(digits - f.size(), '0');
    out += f;
  }
  return out;
}

// Accepts "p", "-p", "p/q", "-p/q" with q > 0 digits only.  Anything else,
// including a zero denominator, yields nullopt.
inline std::optional<Rational> try_parse_rational(std::string_view text) {
  std::size_t i = 0;
  bool negative = false;
  if (i < text.size() && text[i] == '-') {
    negative = true;
    ++i;
  }
  auto span_digits = [&](std::size_t from) {
    std::size_t j = from;
    while (j < text.size() && text[j] >= '0' && text[j] <= '9') ++j;
    return j;
  };
  std::size_t num_end = span_digits(i);
  if (num_end == i) return std::nullopt;
  Integer n(std::string(text.substr(i, num_end - i)));
  Integer d = 1;
  if (num_end < text.size()) {
    if (text[num_end] != '/') return std::nullopt;
    std::size_t den_begin = num_end + 1;
    std::size_t den_end = span_digits(den_begin);
    if (den_end == den_begin || den_end != text.size()) return std::nullopt;
    d = Integer(std::string(text.substr(den_begin, den_end - den_begin)));
    if (d == 0) return std::nullopt;
  }
  if (negative) n = -n;
  return Rational(n, d);
}

}  // namespace plq
