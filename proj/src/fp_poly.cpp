#include "qpcf/fp_poly.hpp"

#include <stdexcept>

namespace qpcf::fp {

namespace {

std::int64_t reduce(std::int64_t a, std::int64_t p) {
  a %= p;
  return a < 0 ? a + p : a;
}

std::int64_t mulmod(std::int64_t a, std::int64_t b, std::int64_t p) {
  return static_cast<std::int64_t>((static_cast<__int128>(a) * b) % p);
}

std::vector<std::int64_t> prime_factors(std::int64_t n) {
  std::vector<std::int64_t> out;
  for (std::int64_t d = 2; d <= n / d; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

}  // namespace

std::int64_t inv_mod(std::int64_t a, std::int64_t p) {
  std::int64_t t = 0, new_t = 1, r = p, new_r = reduce(a, p);
  while (new_r != 0) {
    const std::int64_t q = r / new_r;
    t = t - q * new_t;
    std::swap(t, new_t);
    r = r - q * new_r;
    std::swap(r, new_r);
  }
  if (r != 1) throw std::domain_error("inv_mod: not invertible");
  return reduce(t, p);
}

Poly normalize(Poly a, std::int64_t p) {
  for (auto& c : a) c = reduce(c, p);
  while (!a.empty() && a.back() == 0) a.pop_back();
  return a;
}

Poly sub(const Poly& a, const Poly& b, std::int64_t p) {
  Poly out(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i];
  for (std::size_t i = 0; i < b.size(); ++i) out[i] = reduce(out[i] - b[i], p);
  return normalize(std::move(out), p);
}

Poly mul(const Poly& a, const Poly& b, std::int64_t p) {
  if (a.empty() || b.empty()) return {};
  Poly out(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      out[i + j] = reduce(out[i + j] + mulmod(a[i], b[j], p), p);
    }
  }
  return normalize(std::move(out), p);
}

Poly mod(const Poly& a, const Poly& m, std::int64_t p) {
  Poly r = normalize(a, p);
  const Poly mm = normalize(m, p);
  if (mm.empty()) throw std::domain_error("polynomial modulus is zero");
  const std::int64_t lead_inv = inv_mod(mm.back(), p);
  while (r.size() >= mm.size()) {
    const std::int64_t factor = mulmod(r.back(), lead_inv, p);
    const std::size_t shift = r.size() - mm.size();
    for (std::size_t i = 0; i < mm.size(); ++i) {
      r[shift + i] = reduce(r[shift + i] - mulmod(factor, mm[i], p), p);
    }
    r = normalize(std::move(r), p);
  }
  return r;
}

Poly gcd(Poly a, Poly b, std::int64_t p) {
  a = normalize(std::move(a), p);
  b = normalize(std::move(b), p);
  while (!b.empty()) {
    Poly r = mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    const std::int64_t inv = inv_mod(a.back(), p);
    for (auto& c : a) c = mulmod(c, inv, p);
  }
  return a;
}

Poly pow_mod(const Poly& base, std::uint64_t exponent, const Poly& m, std::int64_t p) {
  Poly result{1};
  result = mod(result, m, p);
  Poly b = mod(base, m, p);
  while (exponent > 0) {
    if (exponent & 1U) result = mod(mul(result, b, p), m, p);
    b = mod(mul(b, b, p), m, p);
    exponent >>= 1U;
  }
  return result;
}

bool is_irreducible(const Poly& g, std::int64_t p) {
  const Poly gn = normalize(g, p);
  if (gn.size() < 2) return false;
  const auto n = static_cast<std::int64_t>(gn.size() - 1);
  if (n == 1) return true;
  const Poly x{0, 1};
  // x^(p^k) mod g for k = 0..n
  std::vector<Poly> frob{mod(x, gn, p)};
  for (std::int64_t k = 1; k <= n; ++k) {
    frob.push_back(pow_mod(frob.back(), static_cast<std::uint64_t>(p), gn, p));
  }
  if (!sub(frob[static_cast<std::size_t>(n)], mod(x, gn, p), p).empty()) return false;
  for (std::int64_t q : prime_factors(n)) {
    const Poly h = sub(frob[static_cast<std::size_t>(n / q)], mod(x, gn, p), p);
    if (gcd(h, gn, p).size() != 1) return false;
  }
  return true;
}

std::optional<Poly> inverse_mod(const Poly& a, const Poly& m, std::int64_t p) {
  Poly r0 = normalize(m, p);
  Poly r1 = mod(a, m, p);
  if (r1.empty()) return std::nullopt;
  Poly s0{}, s1{1};
  while (!r1.empty()) {
    // polynomial division r0 = q r1 + r
    Poly q(r0.size() >= r1.size() ? r0.size() - r1.size() + 1 : 1, 0);
    Poly r = r0;
    const std::int64_t lead_inv = inv_mod(r1.back(), p);
    while (r.size() >= r1.size()) {
      const std::int64_t factor = mulmod(r.back(), lead_inv, p);
      const std::size_t shift = r.size() - r1.size();
      q[shift] = factor;
      for (std::size_t i = 0; i < r1.size(); ++i) {
        r[shift + i] = reduce(r[shift + i] - mulmod(factor, r1[i], p), p);
      }
      r = normalize(std::move(r), p);
    }
    q = normalize(std::move(q), p);
    Poly s2 = sub(s0, mul(q, s1, p), p);
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s2);
  }
  if (r0.size() != 1) return std::nullopt;
  const std::int64_t scale = inv_mod(r0[0], p);
  Poly out = s0;
  for (auto& c : out) c = mulmod(c, scale, p);
  return mod(out, m, p);
}

}  // namespace qpcf::fp
