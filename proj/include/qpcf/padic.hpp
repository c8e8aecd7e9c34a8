#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qpcf/error.hpp"
#include "qpcf/rational.hpp"

namespace qpcf {

enum class DigitVariant { Ruban, Browkin };

std::string to_string(DigitVariant v);
DigitVariant parse_variant(std::string_view name);

// Digit set {0..p-1} (Ruban) or the balanced set {-(p-1)/2..(p-1)/2} (Browkin).
class DigitAlphabet {
 public:
  DigitAlphabet(DigitVariant variant, std::int64_t p);

  DigitVariant variant() const noexcept { return variant_; }
  std::int64_t prime() const noexcept { return p_; }
  std::int64_t min_digit() const noexcept;
  std::int64_t max_digit() const noexcept;
  bool contains(std::int64_t digit) const noexcept;

  // Representative of x mod `modulus` (a power of p) inside the alphabet's range:
  // [0, modulus) for Ruban, the balanced interval for Browkin.
  Integer represent(const Integer& x, const Integer& modulus) const;

  friend bool operator==(const DigitAlphabet&, const DigitAlphabet&) = default;

 private:
  DigitVariant variant_;
  std::int64_t p_;
};

// Element of Q_p held as p^v * u with u a p-adic unit.
//
// Three precision regimes:
//  * capped: value known modulo p^N (digits v..N-1), u kept as its residue in [0, p^{N-v});
//  * exact: a finite digit expansion (a value of Z[1/p]), no cap;
//  * undetermined: every known digit is zero, the value is O(p^N).
// Exact zero is a distinct state and is the only value for which is_exact_zero() holds.
class PAdicNumber {
 public:
  explicit PAdicNumber(const DigitAlphabet& alphabet);  // exact zero

  static PAdicNumber exact(const Rational& r, const DigitAlphabet& alphabet);  // r in Z[1/p]
  static PAdicNumber from_rational(const Rational& r, const DigitAlphabet& alphabet,
                                   std::int64_t precision);
  static PAdicNumber from_digits(const DigitAlphabet& alphabet, std::int64_t first_index,
                                 std::span<const std::int64_t> digits);
  static PAdicNumber undetermined(const DigitAlphabet& alphabet, std::int64_t precision);

  const DigitAlphabet& alphabet() const noexcept { return alphabet_; }
  std::int64_t prime() const noexcept { return alphabet_.prime(); }

  bool is_exact() const noexcept { return !precision_.has_value(); }
  bool is_exact_zero() const noexcept { return is_exact() && unit_ == 0; }
  // No nonzero digit is known (exact zero or O(p^N)).
  bool is_zero_at_precision() const noexcept { return unit_ == 0; }
  bool is_determined() const noexcept { return unit_ != 0 || is_exact(); }

  // nullopt means exact.
  std::optional<std::int64_t> precision() const noexcept { return precision_; }

  // Throws PrecisionExhausted when the value is O(p^N); nullopt for exact zero.
  Valuation valuation() const;
  // Valuation if determined, otherwise the precision N (a lower bound).
  std::int64_t valuation_bound() const;

  // The unit part as stored (canonical residue for capped values).
  const Integer& unit() const noexcept { return unit_; }

  // Digits a_v .. a_{upto-1} in the alphabet. Requires upto <= precision.
  std::vector<std::int64_t> digits(std::int64_t upto) const;
  std::vector<std::int64_t> digits() const;  // all known digits; capped values only
  std::int64_t digit(std::int64_t index) const;

  // The finite-digit value sum_{j<precision} a_j p^j (exact values: the value itself).
  Rational representative() const;
  Rational to_rational() const;  // exact values only

  // True when r agrees with this value modulo p^N (exact values: equality).
  bool congruent(const Rational& r) const;

  // Scalar floor: sum_{j=v}^{0} a_j p^j for v <= 0, zero otherwise.
  Rational floor() const;

  // Lowers the precision cap to n (no-op if already at or below n).
  PAdicNumber truncated(std::int64_t n) const;
  // Reinterprets the known digits as an exact Z[1/p] value relabelled to precision n >= current.
  // Only meaningful where the caller certifies the padded digits (Newton lifting).
  PAdicNumber relabelled(std::int64_t n) const;

  PAdicNumber operator-() const;
  PAdicNumber inverse() const;
  // Multiplies by an exact rational, preserving relative precision.
  PAdicNumber scaled(const Rational& factor) const;

  friend PAdicNumber operator+(const PAdicNumber& a, const PAdicNumber& b);
  friend PAdicNumber operator-(const PAdicNumber& a, const PAdicNumber& b);
  friend PAdicNumber operator*(const PAdicNumber& a, const PAdicNumber& b);
  friend PAdicNumber operator/(const PAdicNumber& a, const PAdicNumber& b);

  std::string to_string() const;

 private:
  PAdicNumber(const DigitAlphabet& alphabet, std::int64_t valuation,
              std::optional<std::int64_t> precision, Integer unit);
  static PAdicNumber normalized(const DigitAlphabet& alphabet, Integer value, std::int64_t shift,
                                std::optional<std::int64_t> precision);

  DigitAlphabet alphabet_;
  std::int64_t valuation_ = 0;
  std::optional<std::int64_t> precision_;
  Integer unit_;
};

Valuation valuation(const Rational& r, const DigitAlphabet& alphabet);

// Exact digits v..upto-1 of a rational.
PAdicNumber digits(const Rational& r, const DigitAlphabet& alphabet, std::int64_t upto);

Rational floor_p(const PAdicNumber& x);
Rational floor_p(const Rational& r, const DigitAlphabet& alphabet);

// Membership in the digit set X (finite sums of alphabet digits times p^{-j}, j >= 0).
bool in_digit_set(const Rational& r, const DigitAlphabet& alphabet);

// Replayable digit source: materializes the same value at any requested precision.
class DigitSource {
 public:
  virtual ~DigitSource() = default;
  virtual const DigitAlphabet& alphabet() const = 0;
  virtual PAdicNumber materialize(std::int64_t precision) const = 0;
};

class RationalSource final : public DigitSource {
 public:
  RationalSource(const Rational& value, const DigitAlphabet& alphabet);
  const DigitAlphabet& alphabet() const override { return alphabet_; }
  PAdicNumber materialize(std::int64_t precision) const override;
  const Rational& value() const noexcept { return value_; }

 private:
  Rational value_;
  DigitAlphabet alphabet_;
};

// Digits a_first, a_{first+1}, ... drawn i.i.d. uniformly from the alphabet.
// Digit j depends only on (seed, j), so any precision replays the same prefix.
class RandomDigitTape final : public DigitSource {
 public:
  RandomDigitTape(std::uint64_t seed, const DigitAlphabet& alphabet, std::int64_t first_index);
  const DigitAlphabet& alphabet() const override { return alphabet_; }
  PAdicNumber materialize(std::int64_t precision) const override;
  std::vector<std::int64_t> raw_digits(std::int64_t count) const;

 private:
  std::uint64_t seed_;
  DigitAlphabet alphabet_;
  std::int64_t first_index_;
};

// Eventually periodic digit expansion of a nonzero rational with p-free denominator part.
struct PeriodicExpansion {
  std::int64_t valuation = 0;
  std::vector<std::int64_t> preperiod;
  std::vector<std::int64_t> period;
};

PeriodicExpansion periodic_expansion(const Rational& r, const DigitAlphabet& alphabet);

// Sums the geometric series described by an expansion.
Rational resum(const PeriodicExpansion& expansion, std::int64_t p);

}  // namespace qpcf
