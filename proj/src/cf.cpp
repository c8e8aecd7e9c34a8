#include "qpcf/cf.hpp"

#include <cmath>

#include "qpcf/error.hpp"
#include "qpcf/rng.hpp"

namespace qpcf {

std::string to_string(CFStatus status) {
  switch (status) {
    case CFStatus::Terminated: return "Terminated";
    case CFStatus::Truncated: return "Truncated";
    case CFStatus::PrecisionExhausted: return "PrecisionExhausted";
    case CFStatus::ZeroAtPrecision: return "ZeroAtPrecision";
  }
  return "Unknown";
}

CFExpansion expand(const ExactElement& alpha, std::int64_t max_steps) {
  if (max_steps < 0) throw PreconditionViolated("max steps must be non-negative");
  CFExpansion out(alpha.field());
  ExactElement a = alpha;
  for (std::int64_t k = 0;; ++k) {
    ZElement c = a.floor();
    ExactElement frac = a - c.value();
    out.quotients.push_back(std::move(c));
    if (frac.is_zero()) {
      out.status = CFStatus::Terminated;
      return out;
    }
    a = frac.inverse();
    if (k == max_steps) {
      out.status = CFStatus::Truncated;
      out.tail = std::move(a);
      return out;
    }
  }
}

CFExpansion expand(const ExtElement& alpha, std::int64_t max_steps) {
  if (max_steps < 0) throw PreconditionViolated("max steps must be non-negative");
  CFExpansion out(alpha.field());
  ExtElement a = alpha;
  for (std::int64_t k = 0;; ++k) {
    out.final_precision = a.k_precision();
    std::optional<ZElement> c;
    try {
      c = a.floor();
    } catch (const PrecisionExhausted&) {
      out.status = CFStatus::PrecisionExhausted;
      return out;
    }
    ExtElement frac = a - ExtElement::from_z(*c);
    out.quotients.push_back(std::move(*c));
    if (frac.is_zero_at_precision()) {
      out.status = CFStatus::ZeroAtPrecision;
      return out;
    }
    if (k == max_steps) {
      out.status = CFStatus::Truncated;
      return out;
    }
    try {
      a = frac.inverse();
    } catch (const PrecisionExhausted&) {
      out.status = CFStatus::PrecisionExhausted;
      return out;
    }
  }
}

std::vector<Convergent> convergents(const std::vector<ZElement>& quotients) {
  if (quotients.empty()) throw PreconditionViolated("convergents of an empty expansion");
  const Field& field = quotients.front().field();
  std::vector<Convergent> out;
  out.reserve(quotients.size());
  ExactElement s_prev2 = ExactElement::zero(field);
  ExactElement t_prev2 = ExactElement::one(field);
  ExactElement s_prev = ExactElement::one(field);
  ExactElement t_prev = ExactElement::zero(field);
  Rational sign = 1;
  for (const auto& c : quotients) {
    ExactElement s = c.value() * s_prev + s_prev2;
    ExactElement t = c.value() * t_prev + t_prev2;
    if (t * s_prev - s * t_prev != ExactElement::scalar(field, sign)) {
      throw InvariantViolation("convergent identity fails at index " + std::to_string(out.size()));
    }
    sign = -sign;
    s_prev2 = std::move(s_prev);
    t_prev2 = std::move(t_prev);
    s_prev = s;
    t_prev = t;
    out.push_back({std::move(s), std::move(t)});
  }
  return out;
}

ExactElement fold(const std::vector<ZElement>& quotients, const std::optional<ExactElement>& tail) {
  if (quotients.empty()) throw PreconditionViolated("fold of an empty expansion");
  auto it = quotients.rbegin();
  ExactElement x = tail ? it->value() + tail->inverse() : it->value();
  for (++it; it != quotients.rend(); ++it) x = it->value() + x.inverse();
  return x;
}

namespace {

AbsValue error_bound(const std::vector<ZElement>& quotients, std::int64_t k,
                     const AbsValue& next_abs) {
  const FieldParams& field = *quotients.front().field();
  std::int64_t exponent = 0;
  for (std::int64_t j = 1; j <= k; ++j) {
    exponent += quotients[static_cast<std::size_t>(j)].abs().exponent();
  }
  return AbsValue::power(field.p, field.e, -(2 * exponent + next_abs.exponent()));
}

}  // namespace

AbsValue convergent_error_bound(const std::vector<ZElement>& quotients, std::int64_t k) {
  if (k < 0 || k + 1 >= static_cast<std::int64_t>(quotients.size())) {
    throw PreconditionViolated("error bound needs quotients through index k+1");
  }
  return error_bound(quotients, k, quotients[static_cast<std::size_t>(k + 1)].abs());
}

AbsValue approximation_error(const ExactElement& alpha, const CFExpansion& expansion,
                             const std::vector<Convergent>& conv, std::int64_t k) {
  const std::int64_t n = expansion.steps();
  if (k < 0 || k > n) throw PreconditionViolated("index outside the expansion");
  const auto& ck = conv[static_cast<std::size_t>(k)];
  const AbsValue error = (alpha - ck.s / ck.t).abs();
  AbsValue expected = AbsValue::zero(alpha.field()->p, alpha.field()->e);
  if (k < n) {
    expected = convergent_error_bound(expansion.quotients, k);
  } else if (expansion.tail) {
    expected = error_bound(expansion.quotients, k, expansion.tail->abs());
  } else if (expansion.status != CFStatus::Terminated) {
    throw PreconditionViolated("error at the last index needs the next complete quotient");
  }
  if (error != expected) {
    throw InvariantViolation("approximation error " + error.to_string() + " differs from " +
                             expected.to_string() + " at index " + std::to_string(k));
  }
  return error;
}

AbsValue approximation_error(const ExactElement& alpha, const CFExpansion& expansion, std::int64_t k) {
  return approximation_error(alpha, expansion, convergents(expansion.quotients), k);
}

Rational galois_height_squared(const ExactElement& x) {
  const FieldParams& field = *x.field();
  if (field.degree() == 1) return Rational(x.coeffs()[0] * x.coeffs()[0]);
  const Rational& b0 = x.coeffs()[0];
  const Rational& b1 = x.coeffs()[1];
  if (field.is_gaussian()) return Rational(b0 * b0 + b1 * b1);
  if (field.is_eisenstein()) return Rational(b0 * b0 - b0 * b1 + b1 * b1);
  throw UnsupportedField("Galois height is implemented for Q(i) and Q(w) only");
}

double galois_height(const ExactElement& x) { return std::sqrt(galois_height_squared(x).get_d()); }

void check_finiteness_preconditions(const FieldParams& field) {
  if (field.alphabet.variant() != DigitVariant::Browkin) {
    throw PreconditionViolated("finiteness test needs the Browkin digit set");
  }
  if (field.is_gaussian()) {
    if (field.p % 4 != 3) {
      throw PreconditionViolated("Q(i) finiteness needs p = 3 mod 4, got p = " + std::to_string(field.p));
    }
    return;
  }
  if (field.is_eisenstein()) {
    if (field.p % 12 != 5) {
      throw PreconditionViolated("Q(w) finiteness needs p = 5 mod 12, got p = " + std::to_string(field.p));
    }
    return;
  }
  throw PreconditionViolated("finiteness test needs Q_p(i) or Q_p(w)");
}

FinitenessCertificate finiteness_test(const ExactElement& alpha, std::int64_t max_steps) {
  const Field& field = alpha.field();
  check_finiteness_preconditions(*field);
  const std::int64_t p = field->p;

  FinitenessCertificate cert(field, alpha);
  cert.denominator = 1;
  for (const auto& c : alpha.coeffs()) {
    mpz_lcm(cert.denominator.get_mpz_t(), cert.denominator.get_mpz_t(), c.get_den_mpz_t());
  }
  remove_factor(cert.denominator, p);

  CFExpansion expansion = expand(alpha, max_steps);
  if (expansion.status != CFStatus::Terminated) {
    throw NonTermination("no termination within " + std::to_string(max_steps) +
                         " steps for alpha = " + alpha.to_string());
  }
  cert.terminated = true;
  cert.steps = expansion.steps();
  cert.quotients = expansion.quotients;

  // H(c) < p/sqrt(2) on Q(i), H(c) < p sqrt(3)/2 on Q(w), compared exactly on H^2.
  const bool gaussian = field->is_gaussian();
  const Rational p2(p * p);
  const Rational bound_sq = gaussian ? Rational(p2 / 2) : Rational(3 * p2 / 4);
  cert.quotient_bound = std::sqrt(bound_sq.get_d());
  cert.d1 = cert.quotient_bound / static_cast<double>(p);
  cert.d2 = 1.0 / static_cast<double>(p * p);

  const auto conv = convergents(expansion.quotients);
  const ExactElement scale = ExactElement::scalar(field, Rational(cert.denominator));
  ExactElement y_prev2 = -(scale * alpha);
  ExactElement y_prev = scale;
  for (std::size_t k = 0; k < conv.size(); ++k) {
    const ZElement& c = expansion.quotients[k];
    const Rational hc = galois_height_squared(c.value());
    cert.max_quotient_height = std::max(cert.max_quotient_height, std::sqrt(hc.get_d()));
    if (hc >= bound_sq) cert.heights_ok = false;

    ExactElement u = conv[k].s - alpha * conv[k].t;
    ExactElement y = scale * u;
    if (y != c.value() * y_prev + y_prev2) cert.recurrence_ok = false;
    const Rational pk = rational_power(p, static_cast<std::int64_t>(k));
    for (const auto& coeff : y.coeffs()) {
      if (Rational(coeff / pk).get_den() != 1) cert.integrality_ok = false;
    }
    const Rational t_sq = galois_height_squared(y) / (pk * pk);
    const double t = std::sqrt(t_sq.get_d());
    if (k >= 2) {
      const long double rhs = static_cast<long double>(cert.d1) * cert.heights[k - 1] +
                              static_cast<long double>(cert.d2) * cert.heights[k - 2];
      if (!(static_cast<long double>(t) < rhs)) cert.contraction_ok = false;
    }
    cert.heights.push_back(t);
    cert.u.push_back(std::move(u));
    y_prev2 = std::move(y_prev);
    y_prev = y;
    cert.y.push_back(std::move(y));
  }
  return cert;
}

ExactElement random_element(const Field& field, std::int64_t bound, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<Rational> coeffs;
  for (std::int64_t k = 0; k < field->degree(); ++k) {
    const std::int64_t a = rng.uniform(-bound, bound);
    std::int64_t c = 0;
    while (c == 0 || c % field->p == 0) c = rng.uniform(-bound, bound);
    coeffs.emplace_back(static_cast<long>(a), static_cast<long>(c));
  }
  return ExactElement(field, std::move(coeffs));
}

nlohmann::json to_json(const CFExpansion& expansion) {
  nlohmann::json quotients = nlohmann::json::array();
  nlohmann::json literals = nlohmann::json::array();
  for (const auto& c : expansion.quotients) {
    quotients.push_back(c.to_json());
    literals.push_back(c.to_string());
  }
  nlohmann::json out = {
      {"field", to_json(*expansion.field)},
      {"quotients", quotients},
      {"quotientLiterals", literals},
      {"status", to_string(expansion.status)},
      {"steps", expansion.steps()},
  };
  if (expansion.final_precision) out["finalPrecision"] = *expansion.final_precision;
  return out;
}

nlohmann::json to_json(const FinitenessCertificate& cert) {
  nlohmann::json quotients = nlohmann::json::array();
  for (const auto& c : cert.quotients) quotients.push_back(c.to_string());
  return {
      {"alpha", cert.alpha.to_string()},
      {"terminated", cert.terminated},
      {"steps", cert.steps},
      {"quotients", quotients},
      {"heights", cert.heights},
      {"maxQuotientHeight", cert.max_quotient_height},
      {"quotientBound", cert.quotient_bound},
      {"D1", cert.d1},
      {"D2", cert.d2},
      {"checks",
       {{"heightBound", cert.heights_ok},
        {"integrality", cert.integrality_ok},
        {"recurrence", cert.recurrence_ok},
        {"contraction", cert.contraction_ok}}},
  };
}

}  // namespace qpcf
