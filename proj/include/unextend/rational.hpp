#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>
#include <string_view>

namespace unextend {

// Arbitrary-precision integer, used as a natural number unless noted.
using Nat = boost::multiprecision::cpp_int;

// Exact rational, always in lowest terms with a positive denominator.
using Rational = boost::multiprecision::cpp_rational;

// 2^-k as an exact rational.
Rational pow2_inv(unsigned k);

// Smallest s with 2^s >= n (n >= 1).
unsigned ceil_log2(const Nat& n);

// Renders "p/q", or just "p" when the denominator is 1.
std::string to_string(const Rational& q);

// Accepts "p" or "p/q" with an optional leading minus; q must be a positive
// integer. Returns nullopt on any syntax violation.
std::optional<Rational> parse_rational(std::string_view text);

// Accepts a nonempty all-digits decimal string.
std::optional<Nat> parse_natural(std::string_view text);

}  // namespace unextend
