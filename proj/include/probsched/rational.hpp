#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace probsched {

// Exact arbitrary-precision rational; always kept in canonical (reduced) form.
using Rational = mpq_class;

// Parses "p/q", "p" or a finite decimal such as "0.25". Throws std::invalid_argument.
Rational parse_rational(std::string_view text);

// "p/q", or "p" when the denominator is 1.
std::string to_string(const Rational& r);

double to_double(const Rational& r);

// Decimal rendering with `digits` significant digits.
std::string to_decimal(const Rational& r, int digits = 12);

// Canonicalized num/den; den must be non-zero.
inline Rational ratio(const mpz_class& num, const mpz_class& den) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline bool is_probability(const Rational& r) { return r >= 0 && r <= 1; }

}  // namespace probsched
