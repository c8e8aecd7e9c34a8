#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qpcf/abs_value.hpp"
#include "qpcf/exact.hpp"
#include "qpcf/field.hpp"
#include "qpcf/padic.hpp"

namespace qpcf {

// Element of K with p-adic coefficients b_{i,j} (each capped or exact).
//
// K-precision is measured in units of 1/e: coefficient row i known modulo p^{N_i} pins the
// element down modulo terms of valuation (e N_i - i)/e.
class ExtElement {
 public:
  explicit ExtElement(Field field);  // exact zero
  ExtElement(Field field, std::vector<PAdicNumber> coeffs);

  // Coefficients capped at absolute precision `precision` (rationals with any p-free denominator).
  static ExtElement from_exact(const ExactElement& x, std::int64_t precision);
  // Exact coefficients; requires every coefficient in Z[1/p].
  static ExtElement exact(const ExactElement& x);
  static ExtElement from_z(const ZElement& z);

  const Field& field() const noexcept { return field_; }
  const std::vector<PAdicNumber>& coeffs() const noexcept { return coeffs_; }
  const PAdicNumber& coeff(std::int64_t i, std::int64_t j) const {
    return coeffs_[field_->index(i, j)];
  }

  bool is_exact() const;
  bool is_exact_zero() const;
  // No coefficient has a known nonzero digit.
  bool is_zero_at_precision() const;

  // nullopt when every coefficient is exact.
  std::optional<std::int64_t> k_precision() const;
  // Lowers the K-precision to P (row i capped at ceil((P + i)/e)).
  ExtElement truncated_k(std::int64_t precision) const;

  // Certifies the leading term; PrecisionExhausted otherwise.
  AbsValue abs() const;
  ZElement floor() const;

  // Newton lifting; fast closed forms are used for m <= 2 unless `force_newton`.
  ExtElement inverse(bool force_newton = false) const;

  ExtElement operator-() const;
  friend ExtElement operator+(const ExtElement& a, const ExtElement& b);
  friend ExtElement operator-(const ExtElement& a, const ExtElement& b);
  friend ExtElement operator*(const ExtElement& a, const ExtElement& b);
  friend ExtElement operator/(const ExtElement& a, const ExtElement& b);

  // True when the exact element agrees with this one to the known precision.
  bool congruent(const ExactElement& x) const;
  // Representative with every coefficient replaced by its finite-digit value.
  ExactElement representative() const;
  ExactElement to_exact() const;  // exact coefficients only

  std::string to_string() const;

 private:
  ExtElement newton_inverse() const;
  ExtElement quadratic_inverse() const;

  Field field_;
  std::vector<PAdicNumber> coeffs_;
};

// Radius p^{s + i/e}, 0 <= i < e.
struct Radius {
  std::int64_t s = 0;
  std::int64_t i = 0;
  std::int64_t exponent(std::int64_t e) const { return s * e + i; }
  static Radius from_exponent(std::int64_t exponent, std::int64_t e);
};

// Balls are open: B(a, rho) = {x : |x - a| < rho}. Decided from coefficient valuations:
// rows i below radius.i need v(b) >= -s, the others v(b) >= 1 - s.
bool ball_contains(const ExactElement& x, Radius radius);

}  // namespace qpcf
