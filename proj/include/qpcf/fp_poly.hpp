#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace qpcf::fp {

// Polynomials over F_p, coefficients ascending, no trailing zeros (zero polynomial is empty).
using Poly = std::vector<std::int64_t>;

Poly normalize(Poly a, std::int64_t p);
Poly sub(const Poly& a, const Poly& b, std::int64_t p);
Poly mul(const Poly& a, const Poly& b, std::int64_t p);
Poly mod(const Poly& a, const Poly& m, std::int64_t p);
Poly gcd(Poly a, Poly b, std::int64_t p);
Poly pow_mod(const Poly& base, std::uint64_t exponent, const Poly& m, std::int64_t p);

// Rabin's test. g must have a unit leading coefficient mod p.
bool is_irreducible(const Poly& g, std::int64_t p);

// Inverse of a modulo an irreducible m; nullopt when a == 0 mod m.
std::optional<Poly> inverse_mod(const Poly& a, const Poly& m, std::int64_t p);

std::int64_t inv_mod(std::int64_t a, std::int64_t p);

}  // namespace qpcf::fp
