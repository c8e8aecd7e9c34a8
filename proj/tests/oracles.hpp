#pragma once

// Reference computations for the tests: machine integers and direct loops.

#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "qpcf/exact.hpp"
#include "qpcf/field.hpp"

namespace oracle {

using i128 = __int128;

inline std::int64_t mod(i128 a, std::int64_t m) {
  const auto r = static_cast<std::int64_t>(a % m);
  return r < 0 ? r + m : r;
}

inline std::int64_t inv_mod(std::int64_t a, std::int64_t p) {
  for (std::int64_t x = 1; x < p; ++x) {
    if (mod(static_cast<i128>(a) * x, p) == 1) return x;
  }
  return 0;
}

inline std::int64_t vp(std::int64_t n, std::int64_t p) {
  if (n == 0) return 1'000'000;
  std::int64_t v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

struct Digits {
  std::int64_t valuation = 0;
  std::vector<std::int64_t> digits;  // a_v, a_{v+1}, ...
};

// Long division: strip p from num/den, then emit d = r mod p (balanced for Browkin) and
// replace r by (r - d)/p.
inline Digits long_division(std::int64_t num, std::int64_t den, std::int64_t p, bool browkin,
                            std::int64_t upto) {
  Digits out;
  if (den < 0) {
    num = -num;
    den = -den;
  }
  std::int64_t v = 0;
  while (num != 0 && num % p == 0) {
    num /= p;
    ++v;
  }
  while (den % p == 0) {
    den /= p;
    --v;
  }
  out.valuation = v;
  i128 n = num;
  const i128 d = den;
  const std::int64_t dinv = inv_mod(mod(d, p), p);
  for (std::int64_t j = v; j < upto; ++j) {
    std::int64_t digit = mod(mod(n, p) * static_cast<i128>(dinv), p);
    if (browkin && digit > (p - 1) / 2) digit -= p;
    out.digits.push_back(digit);
    n = (n - digit * d) / p;
  }
  return out;
}

// Sum_{j=v}^{0} a_j p^j as an exact rational.
inline qpcf::Rational floor_oracle(std::int64_t num, std::int64_t den, std::int64_t p, bool browkin) {
  const Digits d = long_division(num, den, p, browkin, 1);
  qpcf::Rational out = 0;
  for (std::size_t k = 0; k < d.digits.size(); ++k) {
    const std::int64_t j = d.valuation + static_cast<std::int64_t>(k);
    if (j > 0) break;
    qpcf::Rational term(d.digits[k]);
    for (std::int64_t t = j; t < 0; ++t) term /= p;
    out += term;
  }
  out.canonicalize();
  return out;
}

// v_p of a rational, 1e6 for zero.
inline std::int64_t vp(const qpcf::Rational& r, std::int64_t p) {
  if (r == 0) return 1'000'000;
  qpcf::Integer num = r.get_num();
  qpcf::Integer den = r.get_den();
  std::int64_t v = 0;
  while (mpz_divisible_ui_p(num.get_mpz_t(), static_cast<unsigned long>(p))) {
    num /= p;
    ++v;
  }
  while (mpz_divisible_ui_p(den.get_mpz_t(), static_cast<unsigned long>(p))) {
    den /= p;
    --v;
  }
  return v;
}

// Exponent k of |x| = p^{k/e} by the max formula, recomputed from scratch; INT64_MIN for zero.
inline std::int64_t abs_exponent(const qpcf::ExactElement& x) {
  const auto& F = *x.field();
  std::int64_t best = INT64_MIN;
  for (std::int64_t i = 0; i < F.e; ++i) {
    for (std::int64_t j = 0; j < F.f; ++j) {
      const auto& c = x.coeff(i, j);
      if (c == 0) continue;
      best = std::max(best, -vp(c, F.p) * F.e + i);
    }
  }
  return best;
}

// Every coefficient array with digits a_0..a_depth (weights p^0..p^-depth) from the alphabet.
inline std::vector<qpcf::ExactElement> box(const qpcf::Field& field, std::int64_t depth) {
  const auto& F = *field;
  const bool browkin = F.alphabet.variant() == qpcf::DigitVariant::Browkin;
  const std::int64_t lo = browkin ? -(F.p - 1) / 2 : 0;
  const auto m = static_cast<std::size_t>(F.degree());
  const std::size_t slots = m * static_cast<std::size_t>(depth + 1);
  std::vector<std::int64_t> counter(slots, 0);
  std::vector<qpcf::ExactElement> out;
  for (;;) {
    std::vector<qpcf::Rational> coeffs(m);
    for (std::size_t c = 0; c < m; ++c) {
      qpcf::Rational value = 0;
      qpcf::Rational weight = 1;
      for (std::int64_t k = 0; k <= depth; ++k) {
        value += (counter[c * static_cast<std::size_t>(depth + 1) + static_cast<std::size_t>(k)] + lo) * weight;
        weight /= F.p;
      }
      coeffs[c] = value;
    }
    out.emplace_back(field, coeffs);
    std::size_t pos = 0;
    while (pos < slots && ++counter[pos] == F.p) counter[pos++] = 0;
    if (pos == slots) break;
  }
  return out;
}

// Shell sizes of Z* by brute force over a digit box large enough for |c| <= p^{max_n/e}.
inline std::map<std::int64_t, std::int64_t> zstar_shells(const qpcf::Field& field, std::int64_t max_n) {
  std::map<std::int64_t, std::int64_t> out;
  for (const auto& z : box(field, max_n / field->e)) {
    const std::int64_t k = abs_exponent(z);
    if (k >= 1 && k <= max_n) ++out[k];
  }
  return out;
}

// Random rational with |num| <= bound, 1 <= den <= bound.
inline qpcf::Rational random_rational(std::mt19937_64& rng, std::int64_t bound) {
  std::uniform_int_distribution<std::int64_t> num(-bound, bound);
  std::uniform_int_distribution<std::int64_t> den(1, bound);
  qpcf::Rational r(qpcf::Integer(num(rng)), qpcf::Integer(den(rng)));
  r.canonicalize();
  return r;
}

}  // namespace oracle
