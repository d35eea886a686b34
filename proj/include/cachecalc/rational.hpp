#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

namespace cachecalc {

/// Exact rational arithmetic; all closed-form load expressions stay in this
/// type so equality checks in tests are true equalities, not tolerances.
using Rational = mpq_class;
using Integer = mpz_class;

/// binom(a, b), zero whenever a >= b >= 0 does not hold.
Integer binom(long a, long b);

/// num/den in canonical form. The two-argument mpq_class constructor does
/// not reduce, which silently breaks exact equality; route through here.
Rational ratio(const Integer& num, const Integer& den);

/// Parses "3/4", "-1/2", "7", or a plain decimal such as "0.25".
/// Returns nullopt on malformed input.
std::optional<Rational> parse_rational(const std::string& text);

/// Canonical "num/den" (or "num" when the denominator is one).
std::string to_string(const Rational& q);

/// Decimal rendering with the given number of significant digits.
std::string to_decimal_string(double x, int significant_digits = 12);

/// lcm of the denominators of a set of rationals; at least 1.
Integer lcm_denominators(const std::vector<Rational>& values);

}  // namespace cachecalc
