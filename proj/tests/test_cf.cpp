#include <doctest.h>

#include <cmath>

#include "fields.hpp"
#include "oracles.hpp"
#include "qpcf/cf.hpp"

using namespace qpcf;
using fields::q;

namespace {

ExactElement gauss(const Field& f, long a, long b, long c) {
  return ExactElement(f, {q(a, c), q(b, c)});
}

// t_k s_{k-1} - s_k t_{k-1} = (-1)^k, checked independently of the library's own assertion.
void check_identity(const std::vector<Convergent>& cv, const Field& field) {
  ExactElement s_prev = ExactElement::one(field);
  ExactElement t_prev = ExactElement::zero(field);
  for (std::size_t k = 0; k < cv.size(); ++k) {
    const ExactElement lhs = cv[k].t * s_prev - cv[k].s * t_prev;
    CHECK(lhs == ExactElement::scalar(field, q(k % 2 ? -1 : 1)));
    s_prev = cv[k].s;
    t_prev = cv[k].t;
  }
}

}  // namespace

TEST_CASE("expansion examples") {
  const Field qi = fields::q3i();
  const ExactElement i = ExactElement::gamma(qi);
  const ExactElement one = ExactElement::one(qi);

  const CFExpansion z = expand(i - one, 50);
  CHECK(z.status == CFStatus::Terminated);
  CHECK(z.steps() == 0);
  CHECK(z.quotients.front().value() == i - one);

  const ExactElement alpha = (one - i).scaled(q(1, 2));
  const CFExpansion e = expand(alpha, 50);
  CHECK(e.status == CFStatus::Terminated);
  REQUIRE(e.quotients.size() == 2);
  CHECK(e.quotients[0].value() == i - one);
  CHECK(e.quotients[1].value() == (one + i).scaled(q(1, 3)));
  CHECK(e.quotients[0].value() + e.quotients[1].value().inverse() == alpha);

  const Field k = fields::q5b();
  const ExactElement beta = ExactElement::beta(k);
  const CFExpansion ex = expand(beta.scaled(q(-1, 4)), 5);
  CHECK(ex.quotients[0].value() == beta);
  CHECK(ex.status == CFStatus::Truncated);
  CHECK(ex.quotients.size() == 6);
  CHECK(fold(ex.quotients, ex.tail) == beta.scaled(q(-1, 4)));

  CHECK(expand(ExactElement::scalar(make_field(11, 1, 1, q(1, 11), DigitVariant::Ruban), q(7)), 10).steps() == 0);
  CHECK_THROWS_AS(expand(alpha, -1), PreconditionViolated);
}

TEST_CASE("convergent examples") {
  const Field qi = fields::q3i();
  const ExactElement i = ExactElement::gamma(qi);
  const ExactElement one = ExactElement::one(qi);
  const CFExpansion e = expand((one - i).scaled(q(1, 2)), 10);
  const auto cv = convergents(e.quotients);
  CHECK(cv[0].s == e.quotients[0].value());
  CHECK(cv[0].t == one);
  CHECK(cv[1].s == (i - one) * (one + i).scaled(q(1, 3)) + one);
  CHECK(cv[1].s == one.scaled(q(1, 3)));
  CHECK(cv[1].s / cv[1].t == (one - i).scaled(q(1, 2)));
  CHECK(cv[1].t * cv[0].s - cv[1].s * cv[0].t == -one);
  CHECK_THROWS_AS(convergents({}), PreconditionViolated);
}

TEST_CASE("approximation error examples") {
  const Field qi = fields::q3i();
  const ExactElement i = ExactElement::gamma(qi);
  const ExactElement one = ExactElement::one(qi);
  const ExactElement alpha = (one - i).scaled(q(1, 2));
  const CFExpansion e = expand(alpha, 10);
  CHECK(approximation_error(alpha, e, 0) == AbsValue::power(3, 1, -1));
  CHECK(approximation_error(alpha, e, 1).is_zero());

  // Quotients of size p^{1/e}: the error at k is p^{-(2k+1)/e}.
  const Field k = fields::q5b();
  const ZElement beta(ExactElement::beta(k));
  std::vector<ZElement> qs{ZElement(ExactElement::zero(k))};
  for (int n = 0; n < 8; ++n) qs.push_back(beta);
  const ExactElement x = fold(qs);
  const CFExpansion ex = expand(x, 100);
  REQUIRE(ex.status == CFStatus::Terminated);
  REQUIRE(ex.quotients.size() == qs.size());
  for (std::size_t n = 0; n < qs.size(); ++n) CHECK(ex.quotients[n] == qs[n]);
  for (std::int64_t j = 0; j + 1 < static_cast<std::int64_t>(qs.size()); ++j) {
    CHECK(approximation_error(x, ex, j) == AbsValue::power(5, 2, -(2 * j + 1)));
    CHECK(convergent_error_bound(ex.quotients, j) == AbsValue::power(5, 2, -(2 * j + 1)));
  }
}

TEST_CASE("galois height examples") {
  const Field qi = fields::q3i();
  CHECK(galois_height(ExactElement::one(qi)) == doctest::Approx(1.0));
  CHECK(galois_height_squared(gauss(qi, 3, 4, 1)) == 25);
  CHECK(galois_height(gauss(qi, 3, 4, 1)) == doctest::Approx(5.0));
  const Field qw = make_field(5, 1, 2, q(1, 5), DigitVariant::Browkin, {1, 1, 1});
  CHECK(galois_height_squared(ExactElement::one(qw) + ExactElement::gamma(qw)) == 1);
  CHECK(galois_height_squared(gauss(qw, 2, 3, 1)) == 4 - 6 + 9);
  CHECK_THROWS_AS(galois_height(ExactElement::one(fields::q3gb())), UnsupportedField);
  CHECK_THROWS_AS(galois_height(ExactElement::one(fields::q7w())), UnsupportedField);
}

TEST_CASE("finiteness examples") {
  const Field qi = fields::q3i();
  const FinitenessCertificate c = finiteness_test(gauss(qi, 1, -1, 2));
  CHECK(c.valid());
  CHECK(c.steps == 1);
  CHECK(c.d1 + c.d2 < 1);
  CHECK(c.quotient_bound == doctest::Approx(3 / std::sqrt(2.0)));

  const FinitenessCertificate z = finiteness_test(ExactElement::scalar(qi, q(1)));
  CHECK(z.valid());
  CHECK(z.steps == 0);

  const Field q7i = make_field(7, 1, 2, q(1, 7), DigitVariant::Browkin, {1, 0, 1});
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const ExactElement alpha = random_element(q7i, 1000, seed);
    for (const auto& coeff : alpha.coeffs()) CHECK(oracle::vp(Rational(coeff.get_den()), 7) == 0);
    const FinitenessCertificate cert = finiteness_test(alpha);
    CHECK(cert.valid());
    for (const auto& cq : cert.quotients) {
      CHECK(2 * galois_height_squared(cq.value()) < 49);
    }
  }
}

TEST_CASE("finiteness preconditions") {
  CHECK_NOTHROW(check_finiteness_preconditions(*fields::q3i()));
  CHECK_THROWS_AS(check_finiteness_preconditions(*fields::q3i(DigitVariant::Ruban)), PreconditionViolated);
  CHECK_THROWS_AS(check_finiteness_preconditions(*fields::q3()), PreconditionViolated);
  CHECK_THROWS_AS(check_finiteness_preconditions(*make_field(11, 1, 2, q(1, 11), DigitVariant::Browkin, {1, 1, 1})),
                  PreconditionViolated);
  CHECK_NOTHROW(check_finiteness_preconditions(*make_field(17, 1, 2, q(1, 17), DigitVariant::Browkin, {1, 1, 1})));
  CHECK_THROWS_AS(make_field(5, 1, 2, q(1, 5), DigitVariant::Browkin, {1, 0, 1}), NoIrreducibleFound);

  const Field qi = fields::q3i();
  const ExactElement hard = gauss(qi, 917, -404, 991);
  CHECK(finiteness_test(hard).steps > 1);
  CHECK_THROWS_AS(finiteness_test(hard, 1), NonTermination);
}

TEST_CASE("certificate recurrence and integrality, checked directly") {
  const Field qw = make_field(5, 1, 2, q(1, 5), DigitVariant::Browkin, {1, 1, 1});
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const FinitenessCertificate cert = finiteness_test(random_element(qw, 1000, seed));
    REQUIRE(cert.valid());
    const auto& y = cert.y;
    for (std::size_t k = 2; k < y.size(); ++k) {
      CHECK(y[k] == cert.quotients[k].value() * y[k - 1] + y[k - 2]);
    }
    for (std::size_t k = 0; k < y.size(); ++k) {
      const ExactElement reduced = y[k].scaled(rational_power(5, -static_cast<std::int64_t>(k)));
      for (const auto& c : reduced.coeffs()) CHECK(c.get_den() == 1);
    }
    for (std::size_t k = 2; k < cert.heights.size(); ++k) {
      CHECK(cert.heights[k] < cert.d1 * cert.heights[k - 1] + cert.d2 * cert.heights[k - 2]);
    }
    CHECK(cert.y.back().is_zero());
  }
}

TEST_CASE("random exact expansions: identity, sizes and reconstruction") {
  std::mt19937_64 rng(31);
  for (const auto& field : fields::all()) {
    for (int trial = 0; trial < 40; ++trial) {
      const ExactElement alpha = fields::random_element(field, rng, 300);
      const CFExpansion e = expand(alpha, 25);
      const auto cv = convergents(e.quotients);
      check_identity(cv, field);
      CHECK(fold(e.quotients, e.tail) == alpha);
      if (e.status == CFStatus::Terminated) CHECK(cv.back().s / cv.back().t == alpha);
      AbsValue product = AbsValue::power(field->p, field->e, 0);
      for (std::size_t k = 1; k < e.quotients.size(); ++k) {
        CHECK(e.quotients[k].in_zstar());
        product = product * e.quotients[k].abs();
        CHECK(cv[k].t.abs() == product);
        CHECK(cv[k].t.abs() > cv[k - 1].t.abs());
      }
      for (std::int64_t k = 0; k < e.steps(); ++k) {
        CHECK(approximation_error(alpha, e, cv, k) == cv[static_cast<std::size_t>(k)].t.abs().reciprocal() *
                                                          cv[static_cast<std::size_t>(k) + 1].t.abs().reciprocal());
      }
    }
  }
}

TEST_CASE("stream mode agrees with exact mode and never claims termination") {
  std::mt19937_64 rng(32);
  for (const auto& field : fields::all()) {
    for (int trial = 0; trial < 20; ++trial) {
      const ExactElement alpha = fields::random_element(field, rng, 300);
      const CFExpansion exact = expand(alpha, 12);
      const CFExpansion stream = expand(ExtElement::from_exact(alpha, 120), 12);
      CHECK(stream.status != CFStatus::Terminated);
      const std::size_t n = std::min(exact.quotients.size(), stream.quotients.size());
      for (std::size_t k = 0; k < n; ++k) CHECK(stream.quotients[k] == exact.quotients[k]);
      if (exact.status == CFStatus::Terminated) CHECK(stream.status == CFStatus::ZeroAtPrecision);
    }
  }
  const Field k = fields::q5b();
  const CFExpansion starved = expand(ExtElement::from_exact(ExactElement::beta(k).scaled(q(-1, 4)), 4), 100);
  CHECK(starved.status != CFStatus::Terminated);
  CHECK(starved.quotients.size() < 10);
  CHECK(starved.final_precision.has_value());
}

TEST_CASE("expansion JSON") {
  const Field qi = fields::q3i();
  const auto j = to_json(expand(gauss(qi, 1, -1, 2), 10));
  CHECK(j.at("status") == "Terminated");
  CHECK(j.at("steps") == 1);
  CHECK(j.at("quotientLiterals")[1] == "1/3 + 1/3*i");
  CHECK(j.at("quotients")[0][0][0] == "-1");
  CHECK(j.at("field").at("p") == 3);
  const auto c = to_json(finiteness_test(gauss(qi, 1, -1, 2)));
  CHECK(c.at("checks").at("integrality") == true);
  CHECK(c.at("terminated") == true);
}
