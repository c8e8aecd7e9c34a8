#include "qpcf/exact.hpp"

#include <algorithm>

#include "qpcf/basis_arith.hpp"
#include "qpcf/error.hpp"
#include "qpcf/padic.hpp"

namespace qpcf {

namespace {

Rational scale_rational(const Rational& x, const Rational& q) { return Rational(x * q); }

void require_same_field(const ExactElement& a, const ExactElement& b) {
  if (a.field() != b.field() && !(a.field()->p == b.field()->p && a.field()->e == b.field()->e &&
                                  a.field()->f == b.field()->f &&
                                  a.field()->gamma_poly == b.field()->gamma_poly &&
                                  a.field()->ramifier == b.field()->ramifier)) {
    throw PreconditionViolated("elements belong to different fields");
  }
}

std::vector<Rational> unit_vector(std::size_t m, std::size_t k) {
  std::vector<Rational> v(m);
  v[k] = 1;
  return v;
}

// Row-major m x m matrix whose column k holds x * basis_k.
std::vector<Rational> multiplication_matrix(const ExactElement& x) {
  const FieldParams& field = *x.field();
  const auto m = static_cast<std::size_t>(field.degree());
  std::vector<Rational> matrix(m * m);
  for (std::size_t k = 0; k < m; ++k) {
    auto column = detail::multiply_basis(field, x.coeffs(), unit_vector(m, k), Rational(0),
                                         scale_rational);
    for (std::size_t row = 0; row < m; ++row) matrix[row * m + k] = column[row];
  }
  return matrix;
}

std::string gamma_name(const FieldParams& field) {
  if (field.is_gaussian()) return "i";
  if (field.is_eisenstein()) return "w";
  return "gamma";
}

std::string power_name(const std::string& base, std::int64_t k) {
  if (k == 1) return base;
  return base + "^" + std::to_string(k);
}

}  // namespace

ExactElement::ExactElement(Field field)
    : field_(std::move(field)), coeffs_(static_cast<std::size_t>(field_->degree())) {}

ExactElement::ExactElement(Field field, std::vector<Rational> coeffs)
    : field_(std::move(field)), coeffs_(std::move(coeffs)) {
  if (static_cast<std::int64_t>(coeffs_.size()) != field_->degree()) {
    throw PreconditionViolated("coefficient array has the wrong size");
  }
  for (auto& c : coeffs_) c.canonicalize();
}

ExactElement ExactElement::scalar(const Field& field, const Rational& value) {
  ExactElement out(field);
  out.coeffs_[0] = value;
  return out;
}

ExactElement ExactElement::gamma(const Field& field) {
  ExactElement out(field);
  if (field->f >= 2) {
    out.coeffs_[field->index(0, 1)] = 1;
  } else {
    out.coeffs_[0] = -field->gamma_poly[0];
  }
  return out;
}

ExactElement ExactElement::beta(const Field& field) {
  ExactElement out(field);
  if (field->e >= 2) {
    out.coeffs_[field->index(1, 0)] = 1;
  } else {
    out.coeffs_[0] = field->ramifier;
  }
  return out;
}

bool ExactElement::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Rational& c) { return c == 0; });
}

bool ExactElement::is_scalar() const {
  return std::all_of(coeffs_.begin() + 1, coeffs_.end(), [](const Rational& c) { return c == 0; });
}

ExactElement operator+(const ExactElement& a, const ExactElement& b) {
  require_same_field(a, b);
  std::vector<Rational> out(a.coeffs_.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = a.coeffs_[k] + b.coeffs_[k];
  return ExactElement(a.field_, std::move(out));
}

ExactElement operator-(const ExactElement& a, const ExactElement& b) {
  require_same_field(a, b);
  std::vector<Rational> out(a.coeffs_.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = a.coeffs_[k] - b.coeffs_[k];
  return ExactElement(a.field_, std::move(out));
}

ExactElement ExactElement::operator-() const {
  std::vector<Rational> out(coeffs_.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = -coeffs_[k];
  return ExactElement(field_, std::move(out));
}

ExactElement operator*(const ExactElement& a, const ExactElement& b) {
  require_same_field(a, b);
  return ExactElement(a.field_, detail::multiply_basis(*a.field_, a.coeffs_, b.coeffs_,
                                                       Rational(0), scale_rational));
}

ExactElement operator/(const ExactElement& a, const ExactElement& b) { return a * b.inverse(); }

bool operator==(const ExactElement& a, const ExactElement& b) {
  return a.field_->degree() == b.field_->degree() && a.coeffs_ == b.coeffs_;
}

ExactElement ExactElement::scaled(const Rational& factor) const {
  std::vector<Rational> out(coeffs_.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = coeffs_[k] * factor;
  return ExactElement(field_, std::move(out));
}

ExactElement ExactElement::inverse() const {
  if (is_zero()) throw DivisionByZero("inverse of zero");
  const auto m = coeffs_.size();
  if (is_scalar()) return scalar(field_, Rational(1) / coeffs_[0]);
  // Solve M_x y = 1 by Gauss-Jordan elimination on [M | e_0].
  std::vector<Rational> a = multiplication_matrix(*this);
  std::vector<Rational> rhs = unit_vector(m, 0);
  for (std::size_t col = 0; col < m; ++col) {
    std::size_t pivot = col;
    while (pivot < m && a[pivot * m + col] == 0) ++pivot;
    if (pivot == m) throw InvariantViolation("singular multiplication matrix");
    if (pivot != col) {
      for (std::size_t k = 0; k < m; ++k) std::swap(a[pivot * m + k], a[col * m + k]);
      std::swap(rhs[pivot], rhs[col]);
    }
    const Rational inv = Rational(1) / a[col * m + col];
    for (std::size_t k = col; k < m; ++k) a[col * m + k] *= inv;
    rhs[col] *= inv;
    for (std::size_t row = 0; row < m; ++row) {
      if (row == col || a[row * m + col] == 0) continue;
      const Rational factor = a[row * m + col];
      for (std::size_t k = col; k < m; ++k) a[row * m + k] -= factor * a[col * m + k];
      rhs[row] -= factor * rhs[col];
    }
  }
  return ExactElement(field_, std::move(rhs));
}

AbsValue ExactElement::abs() const {
  const FieldParams& field = *field_;
  std::optional<std::int64_t> best;
  for (std::int64_t i = 0; i < field.e; ++i) {
    for (std::int64_t j = 0; j < field.f; ++j) {
      const Valuation v = valuation(coeff(i, j), field.p);
      if (!v) continue;
      const std::int64_t exponent = -*v * field.e + i;
      if (!best || exponent > *best) best = exponent;
    }
  }
  if (!best) return AbsValue::zero(field.p, field.e);
  return AbsValue::power(field.p, field.e, *best);
}

AbsValue ExactElement::det_norm_abs() const {
  const FieldParams& field = *field_;
  const auto m = static_cast<std::size_t>(field.degree());
  const Rational det = determinant(multiplication_matrix(*this), m);
  const Valuation v = valuation(det, field.p);
  if (!v) return AbsValue::zero(field.p, field.e);
  // |x| = p^{-v(det)/m} = p^{(-v(det)/f)/e}
  if (*v % field.f != 0) throw InvariantViolation("norm valuation not divisible by f");
  return AbsValue::power(field.p, field.e, -*v / field.f);
}

ZElement ExactElement::floor() const {
  std::vector<Rational> out(coeffs_.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = floor_p(coeffs_[k], field_->alphabet);
  return ZElement(ExactElement(field_, std::move(out)), ZElement::Unchecked{});
}

std::string ExactElement::to_string() const {
  const FieldParams& field = *field_;
  const std::string g = gamma_name(field);
  std::string out;
  for (std::int64_t i = 0; i < field.e; ++i) {
    for (std::int64_t j = 0; j < field.f; ++j) {
      const Rational& c = coeff(i, j);
      if (c == 0) continue;
      std::string monomial;
      if (j > 0) monomial = power_name(g, j);
      if (i > 0) monomial += (monomial.empty() ? "" : "*") + power_name("beta", i);
      std::string term;
      if (monomial.empty()) {
        term = qpcf::to_string(c);
      } else if (c == 1) {
        term = monomial;
      } else if (c == -1) {
        term = "-" + monomial;
      } else {
        term = qpcf::to_string(c) + "*" + monomial;
      }
      if (out.empty()) {
        out = term;
      } else if (term.front() == '-') {
        out += " - " + term.substr(1);
      } else {
        out += " + " + term;
      }
    }
  }
  return out.empty() ? "0" : out;
}

nlohmann::json ExactElement::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (std::int64_t i = 0; i < field_->e; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::int64_t j = 0; j < field_->f; ++j) row.push_back(qpcf::to_string(coeff(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

ExactElement element_from_json(const Field& field, const nlohmann::json& j) {
  std::vector<Rational> coeffs;
  if (j.size() != static_cast<std::size_t>(field->e)) {
    throw PreconditionViolated("element JSON must have e rows");
  }
  for (const auto& row : j) {
    if (row.size() != static_cast<std::size_t>(field->f)) {
      throw PreconditionViolated("element JSON rows must have f entries");
    }
    for (const auto& c : row) coeffs.push_back(parse_rational(c.get<std::string>()));
  }
  return ExactElement(field, std::move(coeffs));
}

Rational determinant(std::vector<Rational> a, std::size_t n) {
  Rational det = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && a[pivot * n + col] == 0) ++pivot;
    if (pivot == n) return 0;
    if (pivot != col) {
      for (std::size_t k = 0; k < n; ++k) std::swap(a[pivot * n + k], a[col * n + k]);
      det = -det;
    }
    det *= a[col * n + col];
    for (std::size_t row = col + 1; row < n; ++row) {
      if (a[row * n + col] == 0) continue;
      const Rational factor = a[row * n + col] / a[col * n + col];
      for (std::size_t k = col; k < n; ++k) a[row * n + k] -= factor * a[col * n + k];
    }
  }
  return det;
}

ZElement::ZElement(ExactElement value) : value_(std::move(value)) {
  for (const auto& c : value_.coeffs()) {
    if (!in_digit_set(c, value_.field()->alphabet)) {
      throw PreconditionViolated("coefficient " + qpcf::to_string(c) + " is not in the digit set");
    }
  }
}

bool ZElement::in_zstar() const {
  const AbsValue a = abs();
  return !a.is_zero() && a.exponent() > 0;
}

bool operator<(const ZElement& a, const ZElement& b) {
  return std::lexicographical_compare(
      a.value_.coeffs().begin(), a.value_.coeffs().end(), b.value_.coeffs().begin(),
      b.value_.coeffs().end(), [](const Rational& x, const Rational& y) { return cmp(x, y) < 0; });
}

}  // namespace qpcf
