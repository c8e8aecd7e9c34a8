#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace qpcf {

using Integer = mpz_class;
using Rational = mpq_class;

// p-adic valuation; std::nullopt stands for +infinity (the valuation of zero).
using Valuation = std::optional<std::int64_t>;

bool is_prime(std::int64_t n);

// Strips every factor p from n (n != 0) and returns how many were removed.
std::int64_t remove_factor(Integer& n, std::int64_t p);

Valuation valuation(const Integer& n, std::int64_t p);
Valuation valuation(const Rational& r, std::int64_t p);

// p^k, cached per thread. k >= 0.
const Integer& prime_power(std::int64_t p, std::int64_t k);

// p^k as an exact rational, k of either sign.
Rational rational_power(std::int64_t p, std::int64_t k);

// True when r lies in Z[1/p], i.e. its reduced denominator is a power of p.
bool in_z_one_over_p(const Rational& r, std::int64_t p);

std::string to_string(const Integer& n);
std::string to_string(const Rational& r);

// Accepts "a" or "a/b" with optional sign; throws std::invalid_argument.
Rational parse_rational(std::string_view text);

// Euclidean (non-negative) residue of a modulo m > 0.
Integer mod_floor(const Integer& a, const Integer& m);

constexpr std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  return a / b - ((a % b != 0) && ((a < 0) != (b < 0)) ? 1 : 0);
}
constexpr std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return -floor_div(-a, b); }

// a * b^{-1} mod m for b a unit modulo m.
Integer mod_div(const Integer& a, const Integer& b, const Integer& m);

}  // namespace qpcf
