#include "qpcf/padic.hpp"

#include <algorithm>
#include <limits>
#include <map>

#include "qpcf/rng.hpp"

namespace qpcf {

std::string to_string(DigitVariant v) { return v == DigitVariant::Ruban ? "ruban" : "browkin"; }

DigitVariant parse_variant(std::string_view name) {
  if (name == "ruban") return DigitVariant::Ruban;
  if (name == "browkin") return DigitVariant::Browkin;
  throw PreconditionViolated("unknown digit variant '" + std::string(name) + "'");
}

DigitAlphabet::DigitAlphabet(DigitVariant variant, std::int64_t p) : variant_(variant), p_(p) {
  if (p < 2) throw PreconditionViolated("prime must be at least 2");
  if (variant == DigitVariant::Browkin && p == 2) {
    throw BrowkinEvenPrime("the balanced (Browkin) digit set needs an odd prime");
  }
}

std::int64_t DigitAlphabet::min_digit() const noexcept {
  return variant_ == DigitVariant::Ruban ? 0 : -(p_ - 1) / 2;
}

std::int64_t DigitAlphabet::max_digit() const noexcept {
  return variant_ == DigitVariant::Ruban ? p_ - 1 : (p_ - 1) / 2;
}

bool DigitAlphabet::contains(std::int64_t digit) const noexcept {
  return digit >= min_digit() && digit <= max_digit();
}

Integer DigitAlphabet::represent(const Integer& x, const Integer& modulus) const {
  Integer r = mod_floor(x, modulus);
  if (variant_ == DigitVariant::Browkin && 2 * r > modulus) r -= modulus;
  return r;
}

// ---------------------------------------------------------------------------

PAdicNumber::PAdicNumber(const DigitAlphabet& alphabet) : alphabet_(alphabet), unit_(0) {}

PAdicNumber::PAdicNumber(const DigitAlphabet& alphabet, std::int64_t valuation,
                         std::optional<std::int64_t> precision, Integer unit)
    : alphabet_(alphabet), valuation_(valuation), precision_(precision), unit_(std::move(unit)) {}

PAdicNumber PAdicNumber::normalized(const DigitAlphabet& alphabet, Integer value,
                                    std::int64_t shift, std::optional<std::int64_t> precision) {
  const std::int64_t p = alphabet.prime();
  if (precision) {
    if (*precision <= shift) return undetermined(alphabet, *precision);
    value = mod_floor(value, prime_power(p, *precision - shift));
  }
  if (value == 0) {
    return precision ? undetermined(alphabet, *precision) : PAdicNumber(alphabet);
  }
  const std::int64_t w = remove_factor(value, p);
  return PAdicNumber(alphabet, shift + w, precision, std::move(value));
}

PAdicNumber PAdicNumber::exact(const Rational& r, const DigitAlphabet& alphabet) {
  if (!in_z_one_over_p(r, alphabet.prime())) {
    throw PreconditionViolated("exact p-adic values must lie in Z[1/p], got " + qpcf::to_string(r));
  }
  if (r == 0) return PAdicNumber(alphabet);
  Integer num = r.get_num();
  Integer den = r.get_den();
  const std::int64_t v = remove_factor(num, alphabet.prime()) - remove_factor(den, alphabet.prime());
  return PAdicNumber(alphabet, v, std::nullopt, std::move(num));
}

PAdicNumber PAdicNumber::from_rational(const Rational& r, const DigitAlphabet& alphabet,
                                       std::int64_t precision) {
  const std::int64_t p = alphabet.prime();
  if (r == 0) return undetermined(alphabet, precision);
  Integer num = r.get_num();
  Integer den = r.get_den();
  const std::int64_t v = remove_factor(num, p) - remove_factor(den, p);
  if (v >= precision) return undetermined(alphabet, precision);
  Integer unit = mod_div(num, den, prime_power(p, precision - v));
  return PAdicNumber(alphabet, v, precision, std::move(unit));
}

PAdicNumber PAdicNumber::from_digits(const DigitAlphabet& alphabet, std::int64_t first_index,
                                     std::span<const std::int64_t> digits) {
  const std::int64_t p = alphabet.prime();
  std::int64_t chunk = 1;
  std::int64_t chunk_base = p;
  while (chunk_base <= (std::numeric_limits<std::int64_t>::max() / 4) / p) {
    chunk_base *= p;
    ++chunk;
  }
  Integer value = 0;
  const auto n = static_cast<std::int64_t>(digits.size());
  const std::int64_t top = ((n + chunk - 1) / chunk) * chunk;
  for (std::int64_t start = top - chunk; start >= 0; start -= chunk) {
    std::int64_t word = 0;
    for (std::int64_t t = std::min(start + chunk, n) - 1; t >= start; --t) {
      if (!alphabet.contains(digits[static_cast<std::size_t>(t)])) {
        throw PreconditionViolated("digit outside the alphabet");
      }
      word = word * p + digits[static_cast<std::size_t>(t)];
    }
    std::int64_t scale_digits = std::min(start + chunk, n) - start;
    Integer base = prime_power(p, scale_digits);
    value *= base;
    value += static_cast<long>(word);
  }
  return normalized(alphabet, std::move(value), first_index, first_index + n);
}

PAdicNumber PAdicNumber::undetermined(const DigitAlphabet& alphabet, std::int64_t precision) {
  return PAdicNumber(alphabet, precision, precision, Integer(0));
}

Valuation PAdicNumber::valuation() const {
  if (is_exact_zero()) return std::nullopt;
  if (!is_determined()) {
    throw PrecisionExhausted("valuation undetermined: value is O(p^" +
                             std::to_string(*precision_) + ")");
  }
  return valuation_;
}

std::int64_t PAdicNumber::valuation_bound() const {
  if (is_exact_zero()) return std::numeric_limits<std::int64_t>::max();
  return valuation_;
}

std::vector<std::int64_t> PAdicNumber::digits(std::int64_t upto) const {
  if (precision_ && upto > *precision_) {
    throw PrecisionExhausted("digits requested beyond known precision");
  }
  std::vector<std::int64_t> out;
  if (unit_ == 0 || upto <= valuation_) return out;
  const std::int64_t p = prime();
  const std::int64_t count = upto - valuation_;
  Integer rest = alphabet_.represent(unit_, prime_power(p, count));
  const Integer pz(static_cast<long>(p));
  out.reserve(static_cast<std::size_t>(count));
  for (std::int64_t k = 0; k < count; ++k) {
    Integer d = alphabet_.represent(rest, pz);
    out.push_back(d.get_si());
    rest -= d;
    mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), static_cast<unsigned long>(p));
  }
  return out;
}

std::vector<std::int64_t> PAdicNumber::digits() const {
  if (!precision_) throw PreconditionViolated("exact values may have unbounded digit expansions");
  return digits(*precision_);
}

std::int64_t PAdicNumber::digit(std::int64_t index) const {
  if (precision_ && index >= *precision_) throw PrecisionExhausted("digit beyond known precision");
  if (unit_ == 0 || index < valuation_) return 0;
  return digits(index + 1).back();
}

Rational PAdicNumber::representative() const {
  if (unit_ == 0) return Rational(0);
  Integer u = precision_ ? alphabet_.represent(unit_, prime_power(prime(), *precision_ - valuation_))
                         : unit_;
  Rational out(u);
  out *= rational_power(prime(), valuation_);
  return out;
}

Rational PAdicNumber::to_rational() const {
  if (precision_) throw PreconditionViolated("to_rational needs an exact value");
  return representative();
}

bool PAdicNumber::congruent(const Rational& r) const {
  const Rational diff = r - representative();
  if (!precision_) return diff == 0;
  const Valuation v = qpcf::valuation(diff, prime());
  return !v || *v >= *precision_;
}

Rational PAdicNumber::floor() const {
  if (unit_ == 0) {
    if (precision_ && *precision_ < 1) {
      throw PrecisionExhausted("floor needs digits through index 0");
    }
    return Rational(0);
  }
  if (valuation_ >= 1) return Rational(0);
  if (precision_ && *precision_ < 1) throw PrecisionExhausted("floor needs digits through index 0");
  Rational out(alphabet_.represent(unit_, prime_power(prime(), 1 - valuation_)));
  out *= rational_power(prime(), valuation_);
  return out;
}

PAdicNumber PAdicNumber::truncated(std::int64_t n) const {
  if (is_exact_zero()) return undetermined(alphabet_, n);
  if (precision_ && *precision_ <= n) return *this;
  if (unit_ == 0) return undetermined(alphabet_, n);
  return normalized(alphabet_, unit_, valuation_, n);
}

PAdicNumber PAdicNumber::relabelled(std::int64_t n) const {
  if (!precision_ || *precision_ > n) return truncated(n);
  if (unit_ == 0) return undetermined(alphabet_, n);
  return PAdicNumber(alphabet_, valuation_, n, unit_);
}

PAdicNumber PAdicNumber::operator-() const {
  if (unit_ == 0) return *this;
  if (!precision_) return PAdicNumber(alphabet_, valuation_, std::nullopt, -unit_);
  return PAdicNumber(alphabet_, valuation_, precision_,
                     mod_floor(-unit_, prime_power(prime(), *precision_ - valuation_)));
}

PAdicNumber PAdicNumber::inverse() const {
  if (is_exact_zero()) throw DivisionByZero("inverse of zero");
  if (unit_ == 0) throw PrecisionExhausted("inverse of a value indistinguishable from zero");
  if (!precision_) {
    if (unit_ == 1 || unit_ == -1) return PAdicNumber(alphabet_, -valuation_, std::nullopt, unit_);
    throw PrecisionExhausted("inverse of an exact value has no finite expansion; cap it first");
  }
  const std::int64_t rel = *precision_ - valuation_;
  Integer inv;
  mpz_invert(inv.get_mpz_t(), unit_.get_mpz_t(), prime_power(prime(), rel).get_mpz_t());
  return PAdicNumber(alphabet_, -valuation_, -valuation_ + rel, std::move(inv));
}

PAdicNumber PAdicNumber::scaled(const Rational& factor) const {
  const std::int64_t p = prime();
  if (factor == 0) return PAdicNumber(alphabet_);
  if (is_exact_zero()) return *this;
  Integer num = factor.get_num();
  Integer den = factor.get_den();
  const std::int64_t w = remove_factor(num, p) - remove_factor(den, p);
  if (unit_ == 0) return undetermined(alphabet_, *precision_ + w);
  if (!precision_) {
    if (den != 1) throw PrecisionExhausted("exact value scaled by a rational outside Z[1/p]");
    return PAdicNumber(alphabet_, valuation_ + w, std::nullopt, unit_ * num);
  }
  const std::int64_t rel = *precision_ - valuation_;
  Integer unit = mod_div(unit_ * num, den, prime_power(p, rel));
  return PAdicNumber(alphabet_, valuation_ + w, *precision_ + w, std::move(unit));
}

namespace {

std::optional<std::int64_t> min_precision(std::optional<std::int64_t> a,
                                          std::optional<std::int64_t> b) {
  if (!a) return b;
  if (!b) return a;
  return std::min(*a, *b);
}

}  // namespace

PAdicNumber operator+(const PAdicNumber& a, const PAdicNumber& b) {
  if (a.is_exact_zero()) return b;
  if (b.is_exact_zero()) return a;
  const std::int64_t p = a.prime();
  const auto precision = min_precision(a.precision_, b.precision_);
  const std::int64_t low = std::min(a.valuation_, b.valuation_);
  if (precision && *precision <= low) return PAdicNumber::undetermined(a.alphabet_, *precision);
  Integer sum = a.unit_ * prime_power(p, a.valuation_ - low);
  if (b.unit_ != 0) sum += b.unit_ * prime_power(p, b.valuation_ - low);
  return PAdicNumber::normalized(a.alphabet_, std::move(sum), low, precision);
}

PAdicNumber operator-(const PAdicNumber& a, const PAdicNumber& b) { return a + (-b); }

PAdicNumber operator*(const PAdicNumber& a, const PAdicNumber& b) {
  if (a.is_exact_zero()) return a;
  if (b.is_exact_zero()) return b;
  std::optional<std::int64_t> precision;
  if (a.precision_) precision = *a.precision_ + b.valuation_;
  if (b.precision_) precision = min_precision(precision, *b.precision_ + a.valuation_);
  const std::int64_t v = a.valuation_ + b.valuation_;
  if (a.unit_ == 0 || b.unit_ == 0) return PAdicNumber::undetermined(a.alphabet_, *precision);
  Integer prod = a.unit_ * b.unit_;
  if (precision) prod = mod_floor(prod, prime_power(a.prime(), *precision - v));
  return PAdicNumber(a.alphabet_, v, precision, std::move(prod));
}

PAdicNumber operator/(const PAdicNumber& a, const PAdicNumber& b) { return a * b.inverse(); }

std::string PAdicNumber::to_string() const {
  if (is_exact_zero()) return "0";
  std::string out;
  if (unit_ != 0) {
    out = qpcf::to_string(representative());
  } else {
    out = "0";
  }
  if (precision_) out += " + O(" + std::to_string(prime()) + "^" + std::to_string(*precision_) + ")";
  return out;
}

// ---------------------------------------------------------------------------

Valuation valuation(const Rational& r, const DigitAlphabet& alphabet) {
  return valuation(r, alphabet.prime());
}

PAdicNumber digits(const Rational& r, const DigitAlphabet& alphabet, std::int64_t upto) {
  const Valuation v = valuation(r, alphabet.prime());
  if (v && upto <= *v) {
    throw PreconditionViolated("digits: requested precision must exceed the valuation");
  }
  return PAdicNumber::from_rational(r, alphabet, upto);
}

Rational floor_p(const PAdicNumber& x) { return x.floor(); }

Rational floor_p(const Rational& r, const DigitAlphabet& alphabet) {
  const Valuation v = valuation(r, alphabet.prime());
  if (!v || *v >= 1) return Rational(0);
  return PAdicNumber::from_rational(r, alphabet, 1).floor();
}

bool in_digit_set(const Rational& r, const DigitAlphabet& alphabet) {
  return in_z_one_over_p(r, alphabet.prime()) && floor_p(r, alphabet) == r;
}

RationalSource::RationalSource(const Rational& value, const DigitAlphabet& alphabet)
    : value_(value), alphabet_(alphabet) {
  value_.canonicalize();
}

PAdicNumber RationalSource::materialize(std::int64_t precision) const {
  return PAdicNumber::from_rational(value_, alphabet_, precision);
}

RandomDigitTape::RandomDigitTape(std::uint64_t seed, const DigitAlphabet& alphabet,
                                 std::int64_t first_index)
    : seed_(seed), alphabet_(alphabet), first_index_(first_index) {}

std::vector<std::int64_t> RandomDigitTape::raw_digits(std::int64_t count) const {
  const auto p = static_cast<std::uint64_t>(alphabet_.prime());
  std::uint64_t block_base = p;
  int per_block = 1;
  while (block_base <= std::numeric_limits<std::uint64_t>::max() / p / 2) {
    block_base *= p;
    ++per_block;
  }
  // Largest multiple of block_base representable; draws above it are rejected.
  const unsigned __int128 span = static_cast<unsigned __int128>(1) << 64;
  const auto limit = static_cast<std::uint64_t>((span / block_base) * block_base - 1);
  const std::int64_t offset = alphabet_.min_digit();

  std::vector<std::int64_t> out;
  out.reserve(static_cast<std::size_t>(std::max<std::int64_t>(count, 0)));
  for (std::uint64_t block = 0; static_cast<std::int64_t>(out.size()) < count; ++block) {
    const std::uint64_t key = mix64(seed_ ^ mix64(block));
    std::uint64_t word = 0;
    for (std::uint64_t attempt = 0;; ++attempt) {
      word = mix64(key + attempt);
      if (word <= limit) break;
    }
    for (int t = 0; t < per_block && static_cast<std::int64_t>(out.size()) < count; ++t) {
      out.push_back(static_cast<std::int64_t>(word % p) + offset);
      word /= p;
    }
  }
  return out;
}

PAdicNumber RandomDigitTape::materialize(std::int64_t precision) const {
  const std::int64_t count = precision - first_index_;
  if (count <= 0) return PAdicNumber::undetermined(alphabet_, precision);
  const auto raw = raw_digits(count);
  return PAdicNumber::from_digits(alphabet_, first_index_, raw);
}

PeriodicExpansion periodic_expansion(const Rational& r, const DigitAlphabet& alphabet) {
  if (r == 0) throw PreconditionViolated("zero has no periodic digit expansion");
  const std::int64_t p = alphabet.prime();
  Integer num = r.get_num();
  Integer den = r.get_den();
  PeriodicExpansion out;
  out.valuation = remove_factor(num, p) - remove_factor(den, p);
  const Integer pz(static_cast<long>(p));
  std::map<Integer, std::size_t> seen;
  std::vector<std::int64_t> emitted;
  while (true) {
    auto [it, fresh] = seen.emplace(num, emitted.size());
    if (!fresh) {
      const std::size_t start = it->second;
      out.preperiod.assign(emitted.begin(), emitted.begin() + static_cast<std::ptrdiff_t>(start));
      out.period.assign(emitted.begin() + static_cast<std::ptrdiff_t>(start), emitted.end());
      return out;
    }
    const Integer d = alphabet.represent(mod_div(num, den, pz), pz);
    emitted.push_back(d.get_si());
    num -= d * den;
    mpz_divexact_ui(num.get_mpz_t(), num.get_mpz_t(), static_cast<unsigned long>(p));
  }
}

Rational resum(const PeriodicExpansion& expansion, std::int64_t p) {
  Rational head = 0;
  Rational scale = 1;
  for (std::int64_t d : expansion.preperiod) {
    head += scale * d;
    scale *= p;
  }
  Rational cycle = 0;
  Rational cycle_scale = 1;
  for (std::int64_t d : expansion.period) {
    cycle += cycle_scale * d;
    cycle_scale *= p;
  }
  Rational value = head + scale * cycle / (1 - cycle_scale);
  return value * rational_power(p, expansion.valuation);
}

}  // namespace qpcf
