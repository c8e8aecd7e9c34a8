#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace qpcf {

// |x| = p^{exponent/e}, or 0. Exponents live in (1/e)Z, so the numerator is stored.
class AbsValue {
 public:
  static AbsValue zero(std::int64_t p, std::int64_t e) { return AbsValue(p, e, std::nullopt); }
  static AbsValue power(std::int64_t p, std::int64_t e, std::int64_t exponent) {
    return AbsValue(p, e, exponent);
  }

  bool is_zero() const noexcept { return !exponent_.has_value(); }
  std::int64_t exponent() const {
    if (!exponent_) throw std::logic_error("AbsValue::exponent of zero");
    return *exponent_;
  }
  std::int64_t p() const noexcept { return p_; }
  std::int64_t e() const noexcept { return e_; }

  // Normalized valuation -log_p|x| as a numerator over e.
  std::int64_t valuation_numerator() const { return -exponent(); }

  double value() const {
    return exponent_ ? std::pow(static_cast<double>(p_), static_cast<double>(*exponent_) / e_) : 0.0;
  }

  AbsValue reciprocal() const {
    if (!exponent_) throw std::domain_error("reciprocal of |0|");
    return AbsValue(p_, e_, -*exponent_);
  }

  friend AbsValue operator*(const AbsValue& a, const AbsValue& b) {
    if (a.is_zero() || b.is_zero()) return zero(a.p_, a.e_);
    return AbsValue(a.p_, a.e_, *a.exponent_ + *b.exponent_);
  }

  friend bool operator==(const AbsValue& a, const AbsValue& b) {
    return a.p_ == b.p_ && a.e_ == b.e_ && a.exponent_ == b.exponent_;
  }

  friend std::strong_ordering operator<=>(const AbsValue& a, const AbsValue& b) {
    if (a.is_zero() || b.is_zero()) return !a.is_zero() <=> !b.is_zero();
    return *a.exponent_ <=> *b.exponent_;
  }

  std::string to_string() const {
    if (!exponent_) return "0";
    return std::to_string(p_) + "^(" + std::to_string(*exponent_) + "/" + std::to_string(e_) + ")";
  }

 private:
  AbsValue(std::int64_t p, std::int64_t e, std::optional<std::int64_t> exponent)
      : p_(p), e_(e), exponent_(exponent) {}

  std::int64_t p_;
  std::int64_t e_;
  std::optional<std::int64_t> exponent_;
};

}  // namespace qpcf
