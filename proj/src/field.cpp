#include "qpcf/field.hpp"

#include "qpcf/error.hpp"
#include "qpcf/fp_poly.hpp"

namespace qpcf {

namespace {

constexpr std::int64_t kSearchBound = 1'000'000;

fp::Poly reduce_poly(const std::vector<Integer>& poly, std::int64_t p) {
  fp::Poly out;
  const Integer pz(static_cast<long>(p));
  for (const auto& c : poly) out.push_back(mod_floor(c, pz).get_si());
  return fp::normalize(std::move(out), p);
}

std::vector<Integer> poly_of(std::initializer_list<long> coeffs) {
  std::vector<Integer> out;
  for (long c : coeffs) out.emplace_back(c);
  return out;
}

}  // namespace

bool FieldParams::is_gaussian() const {
  return e == 1 && f == 2 && gamma_poly == poly_of({1, 0, 1});
}

bool FieldParams::is_eisenstein() const {
  return e == 1 && f == 2 && gamma_poly == poly_of({1, 1, 1});
}

std::string FieldParams::name() const {
  std::string out = "Q_" + std::to_string(p);
  if (f > 1) {
    if (is_gaussian()) {
      out += "(i)";
    } else if (is_eisenstein()) {
      out += "(w)";
    } else {
      out += "(gamma)";
    }
  }
  if (e > 1) out += "(beta^" + std::to_string(e) + "=" + to_string(ramifier) + ")";
  return out;
}

std::vector<Integer> default_gamma_poly(std::int64_t p, std::int64_t f) {
  if (f == 1) return poly_of({-1, 1});
  if (f == 2 && p % 4 == 3) return poly_of({1, 0, 1});
  if (f == 2 && p % 3 == 2) return poly_of({1, 1, 1});
  // Search monic x^f + c_{f-1} x^{f-1} + ... + c_0 with c_k in [0, p).
  std::int64_t total = 1;
  for (std::int64_t k = 0; k < f && total <= kSearchBound; ++k) total *= p;
  const std::int64_t limit = std::min(total, kSearchBound);
  for (std::int64_t code = 0; code < limit; ++code) {
    fp::Poly candidate(static_cast<std::size_t>(f + 1), 0);
    std::int64_t rest = code;
    for (std::int64_t k = 0; k < f; ++k) {
      candidate[static_cast<std::size_t>(k)] = rest % p;
      rest /= p;
    }
    candidate[static_cast<std::size_t>(f)] = 1;
    if (fp::is_irreducible(candidate, p)) {
      std::vector<Integer> out;
      for (auto c : candidate) out.emplace_back(static_cast<long>(c));
      return out;
    }
  }
  throw NoIrreducibleFound("no irreducible polynomial of degree " + std::to_string(f) +
                           " mod " + std::to_string(p) + " within the search bound");
}

Field make_field(std::int64_t p, std::int64_t e, std::int64_t f, const Rational& r,
                 DigitVariant variant, std::vector<Integer> gamma_poly) {
  if (!is_prime(p)) throw PreconditionViolated(std::to_string(p) + " is not prime");
  if (e < 1 || f < 1) throw PreconditionViolated("e and f must be at least 1");
  if (p > (std::int64_t{1} << 31)) throw PreconditionViolated("prime too large");
  auto field = std::make_shared<FieldParams>();
  field->p = p;
  field->e = e;
  field->f = f;
  field->alphabet = DigitAlphabet(variant, p);
  if (e >= 2) {
    const Valuation v = valuation(r, p);
    if (!v || *v != -1) {
      throw BadRamifier("ramifier must have p-adic valuation -1, got " + to_string(r));
    }
    field->ramifier = r;
  } else {
    field->ramifier = Rational(1, static_cast<unsigned long>(p));
  }
  if (gamma_poly.empty()) gamma_poly = default_gamma_poly(p, f);
  if (static_cast<std::int64_t>(gamma_poly.size()) != f + 1 || gamma_poly.back() != 1) {
    throw PreconditionViolated("gamma polynomial must be monic of degree f");
  }
  if (f >= 2 && !fp::is_irreducible(reduce_poly(gamma_poly, p), p)) {
    throw NoIrreducibleFound("gamma polynomial is reducible mod " + std::to_string(p));
  }
  field->gamma_poly = std::move(gamma_poly);
  field->ramifier.canonicalize();
  return field;
}

nlohmann::json to_json(const FieldParams& field) {
  nlohmann::json poly = nlohmann::json::array();
  for (const auto& c : field.gamma_poly) poly.push_back(c.get_si());
  return {
      {"p", field.p},
      {"e", field.e},
      {"f", field.f},
      {"r", {field.ramifier.get_num().get_si(), field.ramifier.get_den().get_si()}},
      {"variant", to_string(field.alphabet.variant())},
      {"gammaMinPoly", poly},
  };
}

Field field_from_json(const nlohmann::json& j) {
  auto as_int = [](const nlohmann::json& v) -> Integer {
    if (v.is_string()) return Integer(v.get<std::string>());
    return Integer(static_cast<long>(v.get<std::int64_t>()));
  };
  Rational r(as_int(j.at("r").at(0)), as_int(j.at("r").at(1)));
  r.canonicalize();
  std::vector<Integer> poly;
  if (j.contains("gammaMinPoly")) {
    for (const auto& c : j.at("gammaMinPoly")) poly.push_back(as_int(c));
  }
  return make_field(j.at("p").get<std::int64_t>(), j.at("e").get<std::int64_t>(),
                    j.at("f").get<std::int64_t>(), r,
                    parse_variant(j.at("variant").get<std::string>()), std::move(poly));
}

}  // namespace qpcf
