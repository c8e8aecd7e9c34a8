#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace qpcf {

inline constexpr double kSeriesTolerance = 1e-12;

struct SeriesResult {
  double value = 0;
  double tail_bound = 0;  // geometric bound on the omitted terms
  std::int64_t terms = 0;
};

// sum_{n >= first} term(n). Stops once the ratio-based geometric tail bound of the remaining
// terms drops below tolerance * |partial sum|. Throws NotIntegrable when the term ratios do not
// settle below 1 within max_terms.
SeriesResult sum_series(const std::function<double(std::int64_t)>& term, std::int64_t first = 1,
                        double tolerance = kSeriesTolerance, std::int64_t max_terms = 20'000);

// Sum over (i_1..i_k) in N^k of term(i), organised by shells i_1 + ... + i_k = S.
SeriesResult sum_tensor_series(const std::function<double(const std::vector<std::int64_t>&)>& term,
                               std::int64_t arity, double tolerance = kSeriesTolerance,
                               std::int64_t max_shell = 2'000);

}  // namespace qpcf
