#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace percolab {

// Audits that assert equalities and strict inequalities run on exact
// rationals; denominators are products of cluster sizes and overflow any
// fixed-width type quickly.
using Rational = mpq_class;

inline Rational make_rational(long num, long den) {
  if (den == 0) throw std::invalid_argument("make_rational: zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

// Parses a plain decimal like "0.125" or "2" into an exact rational.
inline Rational parse_decimal(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("parse_decimal: empty string");
  std::string digits;
  bool negative = false;
  long frac_digits = 0;
  bool seen_point = false, seen_digit = false;
  std::size_t i = 0;
  if (text[i] == '+' || text[i] == '-') {
    negative = text[i] == '-';
    ++i;
  }
  for (; i < text.size(); ++i) {
    char c = text[i];
    if (c == '.') {
      if (seen_point) throw std::invalid_argument("parse_decimal: two points in " + text);
      seen_point = true;
    } else if (c >= '0' && c <= '9') {
      digits.push_back(c);
      if (seen_point) ++frac_digits;
      seen_digit = true;
    } else {
      throw std::invalid_argument("parse_decimal: bad character in " + text);
    }
  }
  if (!seen_digit) throw std::invalid_argument("parse_decimal: no digits in " + text);
  mpz_class num(digits.empty() ? "0" : digits, 10);
  if (negative) num = -num;
  mpz_class den = 1;
  for (long k = 0; k < frac_digits; ++k) den *= 10;
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline double to_double(const Rational& r) { return r.get_d(); }

inline std::string to_string(const Rational& r) { return r.get_str(); }

}  // namespace percolab
