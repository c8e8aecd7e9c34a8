#include "qpcf/rational.hpp"

#include <stdexcept>
#include <unordered_map>
#include <deque>

namespace qpcf {

bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  if (n < 4) return true;
  if (n % 2 == 0) return false;
  for (std::int64_t d = 3; d <= n / d; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

std::int64_t remove_factor(Integer& n, std::int64_t p) {
  if (n == 0) return 0;
  Integer prime(static_cast<long>(p));
  return static_cast<std::int64_t>(mpz_remove(n.get_mpz_t(), n.get_mpz_t(), prime.get_mpz_t()));
}

Valuation valuation(const Integer& n, std::int64_t p) {
  if (n == 0) return std::nullopt;
  Integer copy = n;
  return remove_factor(copy, p);
}

Valuation valuation(const Rational& r, std::int64_t p) {
  if (r == 0) return std::nullopt;
  Integer num = r.get_num();
  Integer den = r.get_den();
  return remove_factor(num, p) - remove_factor(den, p);
}

const Integer& prime_power(std::int64_t p, std::int64_t k) {
  if (k < 0) throw std::invalid_argument("prime_power: negative exponent");
  thread_local std::unordered_map<std::int64_t, std::deque<Integer>> cache;  // deque keeps references stable
  auto& table = cache[p];
  if (table.empty()) table.emplace_back(1);
  while (static_cast<std::int64_t>(table.size()) <= k) {
    table.emplace_back(table.back() * static_cast<long>(p));
  }
  return table[static_cast<std::size_t>(k)];
}

Rational rational_power(std::int64_t p, std::int64_t k) {
  if (k >= 0) return Rational(prime_power(p, k));
  Rational out(Integer(1), prime_power(p, -k));
  return out;
}

bool in_z_one_over_p(const Rational& r, std::int64_t p) {
  Integer den = r.get_den();
  remove_factor(den, p);
  return den == 1;
}

std::string to_string(const Integer& n) { return n.get_str(); }

std::string to_string(const Rational& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

Rational parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw std::invalid_argument("empty rational");
  Rational r;
  if (r.set_str(s, 10) != 0) throw std::invalid_argument("bad rational: " + s);
  if (r.get_den() == 0) throw std::invalid_argument("zero denominator: " + s);
  r.canonicalize();
  return r;
}

Integer mod_floor(const Integer& a, const Integer& m) {
  Integer r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

Integer mod_div(const Integer& a, const Integer& b, const Integer& m) {
  if (m == 1) return 0;
  Integer inv;
  if (mpz_invert(inv.get_mpz_t(), b.get_mpz_t(), m.get_mpz_t()) == 0) {
    throw std::domain_error("mod_div: divisor is not a unit");
  }
  return mod_floor(a * inv, m);
}

}  // namespace qpcf
