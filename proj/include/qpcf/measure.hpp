#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qpcf/exact.hpp"
#include "qpcf/extension.hpp"

namespace qpcf {

inline constexpr std::int64_t kEnumerationBudget = 1'000'000;

struct BallSpec {
  ExactElement center;
  Radius radius;  // p^{s + i/e}
};

// mu(B(0, p^{s + i/e})) = p^{sm + fi}; 0 <= i < e.
Rational ball_measure(std::int64_t s, std::int64_t i, const FieldParams& field);
Rational ball_measure(const BallSpec& ball);

// #{c in Z* : |c| = p^{n/e}} = p^{fn}(p^f - 1), n >= 1.
Integer count_zstar(std::int64_t n, const FieldParams& field);

struct ZStarShell {
  std::int64_t n = 0;  // |c| = p^{n/e}
  std::vector<ZElement> elements;
};

// Exhaustive, duplicate-free listing of Z* shells n = 1..max_n.
// Throws BudgetExceeded when more than `budget` elements would be produced.
std::vector<ZStarShell> enumerate_zstar(std::int64_t max_n, const Field& field,
                                        std::int64_t budget = kEnumerationBudget);

// Delta_{c_1..c_n} = B([0; c_1, ..., c_n], |c_1 ... c_n|^{-2}). Quotients must be in Z*.
BallSpec cylinder(const Field& field, const std::vector<ZElement>& quotients);
// |c_1 ... c_n|^{-2m}, from the quotient sizes alone.
Rational cylinder_measure(const Field& field, const std::vector<ZElement>& quotients);

// mu(Delta_{c||d}) == mu(Delta_c) mu(Delta_d), the left side via the cylinder ball.
bool product_identity_check(const Field& field, const std::vector<ZElement>& c,
                            const std::vector<ZElement>& d);

// Sum over c in Z* with |c| <= p^{N/e} of mu(Delta_{c, c_1..c_n}), built from the shell counts.
// Throws InvariantViolation unless it equals mu(Delta)(1 - p^{-fN}).
Rational preservation_partial_sum(const Field& field, const std::vector<ZElement>& quotients,
                                  std::int64_t cutoff);

struct CountRow {
  std::int64_t n = 0;
  Integer formula;
  Integer enumerated;
};

std::vector<CountRow> count_table(std::int64_t max_n, const Field& field,
                                  std::int64_t budget = kEnumerationBudget);
std::string count_table_csv(const std::vector<CountRow>& rows);

}  // namespace qpcf
