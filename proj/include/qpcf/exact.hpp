#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "qpcf/abs_value.hpp"
#include "qpcf/field.hpp"
#include "qpcf/rational.hpp"

namespace qpcf {

class ZElement;

// Element of the number field Q(gamma, beta) with exact rational coefficients on the basis
// gamma^j beta^i. Embeds into K; all zero tests are exact.
class ExactElement {
 public:
  explicit ExactElement(Field field);  // zero
  ExactElement(Field field, std::vector<Rational> coeffs);

  static ExactElement zero(const Field& field) { return ExactElement(field); }
  static ExactElement one(const Field& field) { return scalar(field, Rational(1)); }
  static ExactElement scalar(const Field& field, const Rational& value);
  static ExactElement gamma(const Field& field);
  static ExactElement beta(const Field& field);

  const Field& field() const noexcept { return field_; }
  const std::vector<Rational>& coeffs() const noexcept { return coeffs_; }
  const Rational& coeff(std::int64_t i, std::int64_t j) const { return coeffs_[field_->index(i, j)]; }

  bool is_zero() const;
  bool is_scalar() const;  // only the constant coefficient may be nonzero

  ExactElement inverse() const;  // DivisionByZero on zero

  friend ExactElement operator+(const ExactElement& a, const ExactElement& b);
  friend ExactElement operator-(const ExactElement& a, const ExactElement& b);
  friend ExactElement operator*(const ExactElement& a, const ExactElement& b);
  friend ExactElement operator/(const ExactElement& a, const ExactElement& b);
  ExactElement operator-() const;
  friend bool operator==(const ExactElement& a, const ExactElement& b);

  ExactElement scaled(const Rational& factor) const;

  // Max formula over the coefficients.
  AbsValue abs() const;
  // |det M_x|_p^{1/m}, M_x the multiplication matrix on the m-dimensional basis.
  AbsValue det_norm_abs() const;

  ZElement floor() const;

  std::string to_string() const;
  nlohmann::json to_json() const;

 private:
  Field field_;
  std::vector<Rational> coeffs_;
};

// A partial quotient: an element whose coefficients all lie in the digit set X.
class ZElement {
 public:
  explicit ZElement(const Field& field) : value_(field) {}
  // Throws PreconditionViolated when some coefficient is outside X.
  explicit ZElement(ExactElement value);

  const ExactElement& value() const noexcept { return value_; }
  const Field& field() const noexcept { return value_.field(); }
  bool is_zero() const { return value_.is_zero(); }
  AbsValue abs() const { return value_.abs(); }
  // Z*: nonzero with |z| > 1.
  bool in_zstar() const;

  friend bool operator==(const ZElement& a, const ZElement& b) { return a.value_ == b.value_; }
  // Lexicographic on coefficients; for use as an ordered key.
  friend bool operator<(const ZElement& a, const ZElement& b);

  std::string to_string() const { return value_.to_string(); }
  nlohmann::json to_json() const { return value_.to_json(); }

 private:
  struct Unchecked {};
  ZElement(ExactElement value, Unchecked) : value_(std::move(value)) {}
  friend class ExactElement;
  friend class ExtElement;

  ExactElement value_;
};

ExactElement element_from_json(const Field& field, const nlohmann::json& j);

// Determinant of a row-major n x n rational matrix (Gaussian elimination).
Rational determinant(std::vector<Rational> matrix, std::size_t n);

}  // namespace qpcf
