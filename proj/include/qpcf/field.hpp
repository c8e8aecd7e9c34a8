#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qpcf/padic.hpp"
#include "qpcf/rational.hpp"

namespace qpcf {

// K = L(beta), L = Q_p(gamma): gamma is a root of a monic integer polynomial of degree f that
// stays irreducible mod p, and beta^e = r with v_p(r) = -1. Elements are e x f coefficient
// arrays over the basis gamma^j beta^i, stored row-major by i.
struct FieldParams {
  std::int64_t p = 0;
  std::int64_t e = 1;
  std::int64_t f = 1;
  DigitAlphabet alphabet{DigitVariant::Ruban, 2};
  std::vector<Integer> gamma_poly;  // ascending coefficients, gamma_poly[f] == 1
  Rational ramifier;                // r, with beta^e = r

  std::int64_t degree() const noexcept { return e * f; }
  std::size_t index(std::int64_t i, std::int64_t j) const noexcept {
    return static_cast<std::size_t>(i * f + j);
  }
  bool is_gaussian() const;     // e = 1, f = 2, gamma_poly = x^2 + 1
  bool is_eisenstein() const;   // e = 1, f = 2, gamma_poly = x^2 + x + 1
  std::string name() const;
};

using Field = std::shared_ptr<const FieldParams>;

// gamma_poly empty: use the built-in table (x - 1 for f = 1; x^2+1 for p = 3 mod 4,
// x^2+x+1 for p = 2 mod 3, otherwise the first irreducible found by search).
// r is ignored (set to 1/p) when e = 1.
Field make_field(std::int64_t p, std::int64_t e, std::int64_t f, const Rational& r,
                 DigitVariant variant, std::vector<Integer> gamma_poly = {});

std::vector<Integer> default_gamma_poly(std::int64_t p, std::int64_t f);

// {p, e, f, r:[num,den], variant, gammaMinPoly:[ascending coeffs]}
nlohmann::json to_json(const FieldParams& field);
Field field_from_json(const nlohmann::json& j);

}  // namespace qpcf
