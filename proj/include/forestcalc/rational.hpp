#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace forestcalc {

using Rational = mpq_class;
using Integer = mpz_class;

/// "p/q" in lowest terms, or "p" when the denominator is one.
std::string to_string(const Rational& q);

/// Parses "p/q", "p" or a finite decimal such as "0.25".
Rational parse_rational(std::string_view text);

Rational factorial(unsigned k);
Integer factorial_z(unsigned k);

inline bool is_zero(const Rational& q) { return sgn(q) == 0; }

/// Uniform rational p/q with |p| <= max_num, 1 <= q <= max_den.
Rational random_rational(std::mt19937_64& rng, long max_num, long max_den);

/// Uniform rational in [0, 1] with denominator at most max_den.
Rational random_unit_rational(std::mt19937_64& rng, long max_den);

} // namespace forestcalc
