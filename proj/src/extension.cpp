#include "qpcf/extension.hpp"

#include <algorithm>

#include "qpcf/basis_arith.hpp"
#include "qpcf/error.hpp"
#include "qpcf/fp_poly.hpp"

namespace qpcf {

namespace {

constexpr std::int64_t kGuardUnits = 4;

PAdicNumber scale_padic(const PAdicNumber& x, const Rational& q) { return x.scaled(q); }

void require_same_field(const ExtElement& a, const ExtElement& b) {
  if (a.field()->degree() != b.field()->degree() || a.field()->p != b.field()->p) {
    throw PreconditionViolated("elements belong to different fields");
  }
}

std::int64_t row_cap(std::int64_t k_precision, std::int64_t i, std::int64_t e) {
  return ceil_div(k_precision + i, e);
}

// Coefficient row i relabelled or truncated so the element has K-precision exactly P.
ExtElement with_k_precision(const ExtElement& x, std::int64_t precision, bool relabel) {
  const FieldParams& field = *x.field();
  std::vector<PAdicNumber> out;
  out.reserve(x.coeffs().size());
  for (std::int64_t i = 0; i < field.e; ++i) {
    const std::int64_t cap = row_cap(precision, i, field.e);
    for (std::int64_t j = 0; j < field.f; ++j) {
      const PAdicNumber& c = x.coeff(i, j);
      out.push_back(relabel ? c.relabelled(cap) : c.truncated(cap));
    }
  }
  return ExtElement(x.field(), std::move(out));
}

}  // namespace

ExtElement::ExtElement(Field field) : field_(std::move(field)) {
  coeffs_.assign(static_cast<std::size_t>(field_->degree()), PAdicNumber(field_->alphabet));
}

ExtElement::ExtElement(Field field, std::vector<PAdicNumber> coeffs)
    : field_(std::move(field)), coeffs_(std::move(coeffs)) {
  if (static_cast<std::int64_t>(coeffs_.size()) != field_->degree()) {
    throw PreconditionViolated("coefficient array has the wrong size");
  }
}

ExtElement ExtElement::from_exact(const ExactElement& x, std::int64_t precision) {
  std::vector<PAdicNumber> out;
  out.reserve(x.coeffs().size());
  for (const auto& c : x.coeffs()) {
    out.push_back(PAdicNumber::from_rational(c, x.field()->alphabet, precision));
  }
  return ExtElement(x.field(), std::move(out));
}

ExtElement ExtElement::exact(const ExactElement& x) {
  std::vector<PAdicNumber> out;
  out.reserve(x.coeffs().size());
  for (const auto& c : x.coeffs()) out.push_back(PAdicNumber::exact(c, x.field()->alphabet));
  return ExtElement(x.field(), std::move(out));
}

ExtElement ExtElement::from_z(const ZElement& z) { return exact(z.value()); }

bool ExtElement::is_exact() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const PAdicNumber& c) { return c.is_exact(); });
}

bool ExtElement::is_exact_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(),
                     [](const PAdicNumber& c) { return c.is_exact_zero(); });
}

bool ExtElement::is_zero_at_precision() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(),
                     [](const PAdicNumber& c) { return c.is_zero_at_precision(); });
}

std::optional<std::int64_t> ExtElement::k_precision() const {
  std::optional<std::int64_t> out;
  for (std::int64_t i = 0; i < field_->e; ++i) {
    for (std::int64_t j = 0; j < field_->f; ++j) {
      const auto n = coeff(i, j).precision();
      if (!n) continue;
      const std::int64_t k = *n * field_->e - i;
      if (!out || k < *out) out = k;
    }
  }
  return out;
}

ExtElement ExtElement::truncated_k(std::int64_t precision) const {
  return with_k_precision(*this, precision, false);
}

AbsValue ExtElement::abs() const {
  const FieldParams& field = *field_;
  std::optional<std::int64_t> best;
  std::optional<std::int64_t> unknown_bound;
  for (std::int64_t i = 0; i < field.e; ++i) {
    for (std::int64_t j = 0; j < field.f; ++j) {
      const PAdicNumber& c = coeff(i, j);
      if (c.is_exact_zero()) continue;
      if (!c.is_determined()) {
        const std::int64_t bound = -*c.precision() * field.e + i;
        if (!unknown_bound || bound > *unknown_bound) unknown_bound = bound;
        continue;
      }
      const std::int64_t exponent = -*c.valuation() * field.e + i;
      if (!best || exponent > *best) best = exponent;
    }
  }
  if (!best) {
    if (!unknown_bound) return AbsValue::zero(field.p, field.e);
    throw PrecisionExhausted("absolute value undetermined: element is zero at precision");
  }
  if (unknown_bound && *unknown_bound > *best) {
    throw PrecisionExhausted("absolute value undetermined: leading term not certified");
  }
  return AbsValue::power(field.p, field.e, *best);
}

ZElement ExtElement::floor() const {
  std::vector<Rational> out;
  out.reserve(coeffs_.size());
  for (const auto& c : coeffs_) out.push_back(c.floor());
  return ZElement(ExactElement(field_, std::move(out)), ZElement::Unchecked{});
}

ExtElement ExtElement::operator-() const {
  std::vector<PAdicNumber> out;
  out.reserve(coeffs_.size());
  for (const auto& c : coeffs_) out.push_back(-c);
  return ExtElement(field_, std::move(out));
}

ExtElement operator+(const ExtElement& a, const ExtElement& b) {
  require_same_field(a, b);
  std::vector<PAdicNumber> out;
  out.reserve(a.coeffs_.size());
  for (std::size_t k = 0; k < a.coeffs_.size(); ++k) out.push_back(a.coeffs_[k] + b.coeffs_[k]);
  return ExtElement(a.field_, std::move(out));
}

ExtElement operator-(const ExtElement& a, const ExtElement& b) {
  require_same_field(a, b);
  std::vector<PAdicNumber> out;
  out.reserve(a.coeffs_.size());
  for (std::size_t k = 0; k < a.coeffs_.size(); ++k) out.push_back(a.coeffs_[k] - b.coeffs_[k]);
  return ExtElement(a.field_, std::move(out));
}

ExtElement operator*(const ExtElement& a, const ExtElement& b) {
  require_same_field(a, b);
  return ExtElement(a.field_, detail::multiply_basis(*a.field_, a.coeffs_, b.coeffs_,
                                                     PAdicNumber(a.field_->alphabet), scale_padic));
}

ExtElement operator/(const ExtElement& a, const ExtElement& b) { return a * b.inverse(); }

ExtElement ExtElement::inverse(bool force_newton) const {
  if (is_exact_zero()) throw DivisionByZero("inverse of zero");
  if (is_zero_at_precision()) {
    throw PrecisionExhausted("inverse of an element indistinguishable from zero");
  }
  if (field_->degree() == 1) return ExtElement(field_, {coeffs_[0].inverse()});
  if (field_->degree() == 2 && !force_newton) return quadratic_inverse();
  return newton_inverse();
}

// Conjugate over the norm: for m = 2 the norm form has no cancellation, so precision
// propagates without loss.
ExtElement ExtElement::quadratic_inverse() const {
  const FieldParams& field = *field_;
  const PAdicNumber& a = coeffs_[0];
  const PAdicNumber& b = coeffs_[1];
  if (field.f == 2) {
    const Rational g0(field.gamma_poly[0]);
    const Rational g1(field.gamma_poly[1]);
    const PAdicNumber norm = a * a - (a * b).scaled(g1) + (b * b).scaled(g0);
    const PAdicNumber inv = norm.inverse();
    return ExtElement(field_, {(a - b.scaled(g1)) * inv, -(b * inv)});
  }
  const PAdicNumber norm = a * a - (b * b).scaled(field.ramifier);
  const PAdicNumber inv = norm.inverse();
  return ExtElement(field_, {a * inv, -(b * inv)});
}

ExtElement ExtElement::newton_inverse() const {
  const FieldParams& field = *field_;
  const std::int64_t e = field.e;
  const std::int64_t p = field.p;
  const std::int64_t u = abs().exponent();
  const auto precision = k_precision();
  if (!precision) throw PrecisionExhausted("inverse of an exact element needs a precision cap");
  const std::int64_t relative = *precision + u;
  if (relative <= 0) throw PrecisionExhausted("no relative precision left to invert");

  // Leading row i0 and its valuation w: |x| = p^{u/e} = p^{-w} p^{i0/e}.
  const std::int64_t i0 = ((u % e) + e) % e;
  const std::int64_t w = -(u - i0) / e;
  fp::Poly residue(static_cast<std::size_t>(field.f), 0);
  for (std::int64_t j = 0; j < field.f; ++j) {
    const PAdicNumber& c = coeff(i0, j);
    if (c.precision() && *c.precision() <= w) {
      throw PrecisionExhausted("leading residue not certified");
    }
    const std::int64_t d = c.digit(w) % p;
    residue[static_cast<std::size_t>(j)] = d < 0 ? d + p : d;
  }
  fp::Poly modulus;
  for (const auto& g : field.gamma_poly) {
    modulus.push_back(mod_floor(g, Integer(static_cast<long>(p))).get_si());
  }
  const auto h = fp::inverse_mod(residue, modulus, p);
  if (!h) throw InvariantViolation("leading residue is not invertible");

  // y0 = p^{-w} h(gamma) beta^{-i0}, beta^{-i0} = beta^{e - i0} / r.
  std::vector<Rational> start(coeffs_.size());
  const std::int64_t row = i0 == 0 ? 0 : e - i0;
  Rational factor = rational_power(p, -w);
  if (i0 != 0) factor /= field.ramifier;
  for (std::size_t j = 0; j < h->size(); ++j) {
    start[field.index(row, static_cast<std::int64_t>(j))] = Rational((*h)[j]) * factor;
  }
  const std::int64_t start_cap = ceil_div(u + relative + kGuardUnits, e) + 2;
  ExtElement y = ExtElement::from_exact(ExactElement(field_, std::move(start)), start_cap)
                     .truncated_k(u + 1 + kGuardUnits);

  ExtElement one(field_);
  one.coeffs_[0] = PAdicNumber::exact(Rational(1), field.alphabet);
  std::int64_t known = 1;
  while (known < relative) {
    const std::int64_t next = std::min(2 * known, relative);
    const ExtElement xt = truncated_k(-u + next + kGuardUnits);
    const ExtElement yt = with_k_precision(y, u + next + kGuardUnits, true);
    const ExtElement err = one - xt * yt;
    y = (yt + yt * err).truncated_k(u + next);
    known = next;
  }
  return y.truncated_k(*precision + 2 * u);
}

bool ExtElement::congruent(const ExactElement& x) const {
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    if (!coeffs_[k].congruent(x.coeffs()[k])) return false;
  }
  return true;
}

ExactElement ExtElement::representative() const {
  std::vector<Rational> out;
  out.reserve(coeffs_.size());
  for (const auto& c : coeffs_) out.push_back(c.representative());
  return ExactElement(field_, std::move(out));
}

ExactElement ExtElement::to_exact() const {
  std::vector<Rational> out;
  out.reserve(coeffs_.size());
  for (const auto& c : coeffs_) out.push_back(c.to_rational());
  return ExactElement(field_, std::move(out));
}

std::string ExtElement::to_string() const {
  std::string out = "[";
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    if (k > 0) out += ", ";
    out += coeffs_[k].to_string();
  }
  return out + "]";
}

Radius Radius::from_exponent(std::int64_t exponent, std::int64_t e) {
  const std::int64_t s = floor_div(exponent, e);
  return Radius{s, exponent - s * e};
}

bool ball_contains(const ExactElement& x, Radius radius) {
  const FieldParams& field = *x.field();
  for (std::int64_t i = 0; i < field.e; ++i) {
    const std::int64_t need = i < radius.i ? -radius.s : 1 - radius.s;
    for (std::int64_t j = 0; j < field.f; ++j) {
      const Valuation v = valuation(x.coeff(i, j), field.p);
      if (v && *v < need) return false;
    }
  }
  return true;
}

}  // namespace qpcf
