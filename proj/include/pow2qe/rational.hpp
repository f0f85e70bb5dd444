#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace pow2qe {

using Integer = mpz_class;
using Rational = mpq_class;

/// 2^k as an exact rational (k may be negative).
Rational pow2(long k);

/// The exponent k when q = 2^k exactly, otherwise nullopt.
std::optional<long> exact_log2(const Rational& q);

/// Largest k with 2^k <= q. Requires q > 0.
long floor_log2(const Rational& q);

/// The rounding function: the largest power of two <= q for q > 0, else 0.
Rational lambda_of(const Rational& q);

/// The 2-adic valuation v with q = 2^v * (odd / odd). Requires q != 0.
long two_adic_valuation(const Rational& q);

int sign(const Rational& q);

/// Parses "p" or "p/q" (optionally signed). Throws std::invalid_argument.
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& q);

std::size_t hash_value(const Rational& q);

}  // namespace pow2qe
