#include "qpcf/measure.hpp"

#include <sstream>

#include "qpcf/cf.hpp"
#include "qpcf/error.hpp"

namespace qpcf {

namespace {

void require_zstar(const std::vector<ZElement>& quotients) {
  for (const auto& c : quotients) {
    if (!c.in_zstar()) throw NotInZStar(c.to_string() + " is not in Z*");
  }
}

std::int64_t total_exponent(const std::vector<ZElement>& quotients) {
  std::int64_t k = 0;
  for (const auto& c : quotients) k += c.abs().exponent();
  return k;
}

}  // namespace

Rational ball_measure(std::int64_t s, std::int64_t i, const FieldParams& field) {
  if (i < 0 || i >= field.e) throw PreconditionViolated("ball index i must satisfy 0 <= i < e");
  return rational_power(field.p, s * field.degree() + field.f * i);
}

Rational ball_measure(const BallSpec& ball) {
  return ball_measure(ball.radius.s, ball.radius.i, *ball.center.field());
}

Integer count_zstar(std::int64_t n, const FieldParams& field) {
  if (n < 1) throw PreconditionViolated("Z* shells start at n = 1");
  return prime_power(field.p, field.f * n) * (prime_power(field.p, field.f) - 1);
}

std::vector<ZStarShell> enumerate_zstar(std::int64_t max_n, const Field& field, std::int64_t budget) {
  if (max_n < 0) throw PreconditionViolated("max_n must be non-negative");
  const FieldParams& F = *field;
  Integer total = 0;
  for (std::int64_t n = 1; n <= max_n; ++n) total += count_zstar(n, F);
  if (total > budget) {
    throw BudgetExceeded("enumeration would produce " + to_string(total) +
                         " elements, budget is " + std::to_string(budget));
  }

  std::vector<ZStarShell> shells;
  const std::int64_t p = F.p;
  for (std::int64_t n = 1; n <= max_n; ++n) {
    const std::int64_t lead_row = n % F.e;
    // Digits a_0 .. a_{depth-1} (weights p^0 .. p^{-(depth-1)}) per coefficient.
    std::vector<std::int64_t> depth(static_cast<std::size_t>(F.degree()), 0);
    for (std::int64_t i = 0; i < F.e; ++i) {
      const std::int64_t d = i == lead_row ? (n - lead_row) / F.e + 1 : std::max<std::int64_t>(ceil_div(n - i, F.e), 0);
      for (std::int64_t j = 0; j < F.f; ++j) depth[F.index(i, j)] = d;
    }
    std::int64_t positions = 0;
    for (auto d : depth) positions += d;

    ZStarShell shell{n, {}};
    shell.elements.reserve(count_zstar(n, F).get_ui());
    std::vector<std::int64_t> counter(static_cast<std::size_t>(positions), 0);
    for (;;) {
      std::vector<Rational> coeffs;
      coeffs.reserve(depth.size());
      bool leading = false;
      std::size_t pos = 0;
      for (std::size_t k = 0; k < depth.size(); ++k) {
        Integer num = 0;
        for (std::int64_t t = 0; t < depth[k]; ++t, ++pos) {
          const std::int64_t digit = counter[pos] + F.alphabet.min_digit();
          num = num * p + digit;
          if (t == depth[k] - 1 && digit != 0 &&
              static_cast<std::int64_t>(k) / F.f == lead_row) {
            leading = true;
          }
        }
        Rational value(num, depth[k] > 0 ? prime_power(p, depth[k] - 1) : Integer(1));
        value.canonicalize();
        coeffs.push_back(std::move(value));
      }
      if (leading) shell.elements.emplace_back(ExactElement(field, std::move(coeffs)));

      std::size_t k = 0;
      while (k < counter.size() && ++counter[k] == p) counter[k++] = 0;
      if (k == counter.size()) break;
    }
    shells.push_back(std::move(shell));
  }
  return shells;
}

BallSpec cylinder(const Field& field, const std::vector<ZElement>& quotients) {
  require_zstar(quotients);
  std::vector<ZElement> full{ZElement(field)};
  full.insert(full.end(), quotients.begin(), quotients.end());
  return BallSpec{fold(full), Radius::from_exponent(-2 * total_exponent(quotients), field->e)};
}

Rational cylinder_measure(const Field& field, const std::vector<ZElement>& quotients) {
  require_zstar(quotients);
  return rational_power(field->p, -2 * field->f * total_exponent(quotients));
}

bool product_identity_check(const Field& field, const std::vector<ZElement>& c,
                            const std::vector<ZElement>& d) {
  std::vector<ZElement> joined = c;
  joined.insert(joined.end(), d.begin(), d.end());
  return ball_measure(cylinder(field, joined)) ==
         cylinder_measure(field, c) * cylinder_measure(field, d);
}

Rational preservation_partial_sum(const Field& field, const std::vector<ZElement>& quotients,
                                  std::int64_t cutoff) {
  if (cutoff < 1) throw PreconditionViolated("cutoff must be at least 1");
  const FieldParams& F = *field;
  const Rational base = cylinder_measure(field, quotients);
  Rational sum = 0;
  for (std::int64_t n = 1; n <= cutoff; ++n) {
    // Each c with |c| = p^{n/e} contributes |c|^{-2m} mu(Delta).
    sum += Rational(count_zstar(n, F)) * rational_power(F.p, -2 * F.f * n) * base;
  }
  const Rational closed = base * (1 - rational_power(F.p, -F.f * cutoff));
  if (sum != closed) {
    throw InvariantViolation("partial sum " + to_string(sum) + " differs from " + to_string(closed));
  }
  return sum;
}

std::vector<CountRow> count_table(std::int64_t max_n, const Field& field, std::int64_t budget) {
  std::vector<CountRow> rows;
  for (const auto& shell : enumerate_zstar(max_n, field, budget)) {
    rows.push_back({shell.n, count_zstar(shell.n, *field),
                    Integer(static_cast<unsigned long>(shell.elements.size()))});
  }
  return rows;
}

std::string count_table_csv(const std::vector<CountRow>& rows) {
  std::ostringstream out;
  out << "n,formula,enumerated\n";
  for (const auto& row : rows) {
    out << row.n << ',' << row.formula.get_str() << ',' << row.enumerated.get_str() << '\n';
  }
  return out.str();
}

}  // namespace qpcf
