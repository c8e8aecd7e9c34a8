#include <doctest.h>

#include "fields.hpp"
#include "qpcf/error.hpp"
#include "qpcf/literal.hpp"

using namespace qpcf;
using fields::q;

namespace {

std::size_t error_position(const Field& f, const std::string& text) {
  try {
    parse_element(f, text);
  } catch (const ParseError& e) {
    return e.position();
  }
  return std::string::npos;
}

}  // namespace

TEST_CASE("literal grammar") {
  const Field qi = fields::q3i();
  const ExactElement i = ExactElement::gamma(qi);
  const ExactElement one = ExactElement::one(qi);
  CHECK(parse_element(qi, "(1-i)/2") == (one - i).scaled(q(1, 2)));
  CHECK(parse_element(qi, " -1 + i ") == i - one);
  CHECK(parse_element(qi, "2i") == i.scaled(q(2)));
  CHECK(parse_element(qi, "1/3 + 1/3*i") == (one + i).scaled(q(1, 3)));
  CHECK(parse_element(qi, "i^2") == -one);
  CHECK(parse_element(qi, "i^-1") == -i);
  CHECK(parse_element(qi, "gamma") == i);
  CHECK(parse_element(qi, "--3") == one.scaled(q(3)));
  CHECK(parse_element(qi, "2*(3 - i)(3 + i)") == one.scaled(q(20)));

  const Field k = fields::q5b();
  const ExactElement beta = ExactElement::beta(k);
  CHECK(parse_element(k, "(-1/4)*beta") == beta.scaled(q(-1, 4)));
  CHECK(parse_element(k, "beta^2") == ExactElement::scalar(k, q(1, 15)));
  CHECK(parse_element(k, "1/beta") == beta.scaled(q(15)));
  CHECK(parse_element(fields::q3(), "beta") == ExactElement::scalar(fields::q3(), q(1, 3)));

  const Field qw = make_field(5, 1, 2, q(1, 5), DigitVariant::Browkin, {1, 1, 1});
  CHECK(parse_element(qw, "1 + w + w^2").is_zero());
}

TEST_CASE("literal errors carry positions") {
  const Field qi = fields::q3i();
  CHECK(error_position(qi, "1/(2") == 4);
  CHECK(error_position(qi, "1 + foo") == 4);
  CHECK(error_position(qi, "") == 0);
  CHECK(error_position(qi, "3 $") == 2);
  CHECK(error_position(qi, "1/(i-i)") == 2);
  CHECK(error_position(qi, "w") == 0);
  CHECK(error_position(fields::q3(), "2 + i") == 4);
  CHECK(caret_diagnostic("1/(2", 4, "expected ')'") == "1/(2\n    ^ expected ')'");

  try {
    parse_element_list(qi, "1/3, (2");
    FAIL("no error");
  } catch (const ParseError& e) {
    CHECK(e.position() == 7);
  }
  const auto list = parse_element_list(qi, "1/3, 1/9 + i");
  REQUIRE(list.size() == 2);
  CHECK(list[1] == ExactElement(qi, {q(1, 9), q(1)}));
}

TEST_CASE("printed elements parse back") {
  std::mt19937_64 rng(51);
  for (const auto& field : fields::all()) {
    for (int trial = 0; trial < 100; ++trial) {
      const ExactElement x = fields::random_element(field, rng, 500);
      CHECK(parse_element(field, x.to_string()) == x);
    }
  }
}
