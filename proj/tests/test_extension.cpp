#include <doctest.h>

#include "fields.hpp"
#include "oracles.hpp"
#include "qpcf/extension.hpp"

using namespace qpcf;
using fields::q;

TEST_CASE("make_field examples") {
  const Field k = fields::q5b();
  CHECK(k->degree() == 2);
  CHECK(k->ramifier == q(1, 15));
  CHECK(k->name() == "Q_5(beta^2=1/15)");

  const Field qi = make_field(3, 1, 2, q(5), DigitVariant::Browkin);
  CHECK(qi->is_gaussian());
  CHECK(qi->ramifier == q(1, 3));

  const Field base = make_field(5, 1, 1, q(1, 5), DigitVariant::Ruban);
  CHECK(base->degree() == 1);
  CHECK(make_field(5, 1, 2, q(1, 5), DigitVariant::Ruban)->gamma_poly.size() == 3);
  CHECK(make_field(11, 1, 2, q(1, 11), DigitVariant::Ruban)->is_gaussian());
  CHECK(make_field(5, 1, 2, q(1, 5), DigitVariant::Ruban)->is_eisenstein());
  CHECK(make_field(7, 1, 4, q(1, 7), DigitVariant::Ruban)->gamma_poly.size() == 5);

  CHECK_THROWS_AS(make_field(5, 2, 1, q(1, 25), DigitVariant::Ruban), BadRamifier);
  CHECK_THROWS_AS(make_field(5, 2, 1, q(3), DigitVariant::Ruban), BadRamifier);
  CHECK_THROWS_AS(make_field(5, 1, 2, q(1, 5), DigitVariant::Ruban, {1, 0, 1}), NoIrreducibleFound);
  CHECK_THROWS_AS(make_field(2, 1, 1, q(1, 2), DigitVariant::Browkin), BrowkinEvenPrime);
  CHECK_THROWS_AS(make_field(9, 1, 1, q(1, 9), DigitVariant::Ruban), PreconditionViolated);
}

TEST_CASE("field descriptors round-trip through JSON") {
  for (const auto& f : fields::all()) {
    const Field back = field_from_json(to_json(*f));
    CHECK(back->p == f->p);
    CHECK(back->e == f->e);
    CHECK(back->f == f->f);
    CHECK(back->ramifier == f->ramifier);
    CHECK(back->gamma_poly == f->gamma_poly);
    CHECK(back->alphabet == f->alphabet);
  }
}

TEST_CASE("abs examples") {
  const Field k = fields::q5b();
  CHECK(ExactElement::beta(k).abs() == AbsValue::power(5, 2, 1));
  CHECK(ExactElement::gamma(fields::q3i()).abs() == AbsValue::power(3, 1, 0));
  const Field l = make_field(5, 1, 2, q(1, 5), DigitVariant::Ruban);
  const ExactElement x = ExactElement::scalar(l, q(5)) + ExactElement::gamma(l).scaled(q(1, 5));
  CHECK(x.abs() == AbsValue::power(5, 1, 1));
  CHECK(ExactElement::zero(l).abs().is_zero());
}

TEST_CASE("arithmetic examples") {
  const Field qi = fields::q3i();
  const ExactElement i = ExactElement::gamma(qi);
  const ExactElement one = ExactElement::one(qi);
  CHECK((one + i) * (one - i) == ExactElement::scalar(qi, q(2)));
  CHECK((one + i).inverse() == (one - i).scaled(q(1, 2)));
  CHECK((one + i) * (one + i).inverse() == one);

  const Field k = fields::q5b();
  const ExactElement b = ExactElement::beta(k);
  CHECK(b * b == ExactElement::scalar(k, q(1, 15)));
  CHECK_THROWS_AS(ExactElement::zero(k).inverse(), DivisionByZero);
  CHECK_THROWS_AS(ExtElement(k).inverse(), DivisionByZero);

  const Field m4 = fields::q3gb();
  const ExactElement g = ExactElement::gamma(m4);
  const ExactElement bb = ExactElement::beta(m4);
  CHECK(bb * bb == ExactElement::scalar(m4, q(1, 3)));
  CHECK(g * g == ExactElement::scalar(m4, q(-1)));
}

TEST_CASE("floor examples") {
  const Field k = fields::q5b();
  const ExactElement alpha = ExactElement::beta(k).scaled(q(-1, 4));
  CHECK(alpha.floor().value() == ExactElement::beta(k));
  CHECK(ExtElement::from_exact(alpha, 30).floor().value() == ExactElement::beta(k));

  const ExactElement small = ExactElement::scalar(k, q(5, 7));
  CHECK(small.floor().is_zero());

  const Field qi = fields::q3i();
  const ExactElement x = (ExactElement::one(qi) - ExactElement::gamma(qi)).scaled(q(1, 2));
  CHECK(x.floor().value() == ExactElement::gamma(qi) - ExactElement::one(qi));
}

TEST_CASE("distinct partial quotients are at distance at least 1") {
  struct Case {
    Field field;
    std::int64_t depth;
  };
  const std::vector<Case> cases = {
      {fields::q3(), 2},
      {fields::q5(), 2},
      {make_field(5, 1, 1, q(1, 5), DigitVariant::Browkin), 2},
      {fields::q3i(), 1},
      {fields::q3i(DigitVariant::Ruban), 2},
      {fields::q5b(), 1},
      {fields::q3gb(), 0},
  };
  for (const auto& c : cases) {
    const auto elems = oracle::box(c.field, c.depth);
    std::int64_t closest = INT64_MAX;
    for (std::size_t a = 0; a < elems.size(); ++a) {
      CHECK(ZElement(elems[a]).value() == elems[a]);
      for (std::size_t b = a + 1; b < elems.size(); ++b) {
        closest = std::min(closest, oracle::abs_exponent(elems[a] - elems[b]));
      }
    }
    CHECK(closest >= 0);
  }
}

TEST_CASE("floor leaves a remainder of size at most p^(-1/e)") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto fs = fields::all();
    const Field& field = fs[static_cast<std::size_t>(trial) % fs.size()];
    const ExactElement x = fields::random_element(field, rng, 400);
    const ExactElement rest = x - x.floor().value();
    if (!rest.is_zero()) CHECK(oracle::abs_exponent(rest) <= -1);
    CHECK_NOTHROW(ZElement(x.floor().value()));
  }
}

TEST_CASE("max-formula abs equals the determinant norm") {
  std::mt19937_64 rng(22);
  for (const auto& field : fields::all()) {
    for (int trial = 0; trial < 200; ++trial) {
      const ExactElement x = fields::random_nonzero(field, rng);
      CHECK(x.abs() == x.det_norm_abs());
      CHECK(x.abs().exponent() == oracle::abs_exponent(x));
    }
  }
}

TEST_CASE("abs is multiplicative and ultrametric") {
  std::mt19937_64 rng(23);
  for (const auto& field : fields::all()) {
    for (int trial = 0; trial < 100; ++trial) {
      const ExactElement x = fields::random_nonzero(field, rng);
      const ExactElement y = fields::random_nonzero(field, rng);
      CHECK((x * y).abs() == x.abs() * y.abs());
      CHECK(x.inverse().abs() == x.abs().reciprocal());
      const ExactElement s = x + y;
      CHECK(s.abs() <= std::max(x.abs(), y.abs()));
      if (x.abs() != y.abs()) CHECK(s.abs() == std::max(x.abs(), y.abs()));
    }
  }
}

TEST_CASE("ball membership matches coefficient valuations") {
  std::mt19937_64 rng(24);
  for (const auto& field : fields::all()) {
    for (int trial = 0; trial < 150; ++trial) {
      const ExactElement x = fields::random_element(field, rng);
      const std::int64_t s = static_cast<std::int64_t>(rng() % 7) - 3;
      bool all_in = true;
      for (const auto& c : x.coeffs()) all_in = all_in && oracle::vp(c, field->p) >= 1 - s;
      CHECK(ball_contains(x, Radius{s, 0}) == all_in);
      const std::int64_t i = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(field->e));
      const bool inside = x.is_zero() || oracle::abs_exponent(x) < s * field->e + i;
      CHECK(ball_contains(x, Radius{s, i}) == inside);
    }
  }
}

TEST_CASE("p-adic arithmetic agrees with exact arithmetic") {
  std::mt19937_64 rng(25);
  for (const auto& field : fields::all()) {
    for (int trial = 0; trial < 60; ++trial) {
      const ExactElement x = fields::random_nonzero(field, rng);
      const ExactElement y = fields::random_nonzero(field, rng);
      const ExtElement a = ExtElement::from_exact(x, 40);
      const ExtElement b = ExtElement::from_exact(y, 40);
      CHECK((a + b).congruent(x + y));
      CHECK((a - b).congruent(x - y));
      CHECK((a * b).congruent(x * y));
      CHECK((a / b).congruent(x / y));
      CHECK(a.abs() == x.abs());
      CHECK(a.floor().value() == x.floor().value());
    }
  }
}

TEST_CASE("Newton inverse matches exact inverse and the closed forms") {
  std::mt19937_64 rng(26);
  for (const auto& field : fields::all()) {
    for (int trial = 0; trial < 40; ++trial) {
      const ExactElement x = fields::random_nonzero(field, rng);
      const ExtElement a = ExtElement::from_exact(x, 50);
      const ExtElement newton = a.inverse(true);
      const ExtElement fast = a.inverse();
      CHECK(newton.congruent(x.inverse()));
      CHECK(fast.congruent(x.inverse()));
      const std::int64_t u = x.abs().exponent();
      CHECK(*newton.k_precision() == *a.k_precision() + 2 * u);
      CHECK(*fast.k_precision() == *newton.k_precision());
    }
  }
}

TEST_CASE("abs on undetermined values raises PrecisionExhausted") {
  const Field k = fields::q5b();
  const ExactElement tiny = ExactElement::scalar(k, q(625));
  const ExtElement a = ExtElement::from_exact(tiny, 3);
  CHECK(a.is_zero_at_precision());
  CHECK_THROWS_AS(a.abs(), PrecisionExhausted);
  CHECK_THROWS_AS(a.inverse(), PrecisionExhausted);
  CHECK(ExtElement::exact(ExactElement::beta(k)).is_exact());
}
