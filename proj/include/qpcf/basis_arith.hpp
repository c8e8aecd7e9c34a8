#pragma once

#include <cstdint>
#include <vector>

#include "qpcf/field.hpp"
#include "qpcf/padic.hpp"

namespace qpcf::detail {

inline bool is_exact_zero(const Rational& x) { return sgn(x) == 0; }
inline bool is_exact_zero(const PAdicNumber& x) { return x.is_exact_zero(); }

// Product of two e x f coefficient arrays, reducing gamma^{>=f} by the gamma polynomial and
// beta^{>=e} by beta^e = r. `scale(x, q)` multiplies a coefficient by an exact rational.
template <class T, class Scale>
std::vector<T> multiply_basis(const FieldParams& field, const std::vector<T>& a,
                              const std::vector<T>& b, const T& zero, Scale scale) {
  const std::int64_t e = field.e;
  const std::int64_t f = field.f;
  const std::int64_t rows = 2 * e - 1;
  const std::int64_t cols = 2 * f - 1;
  std::vector<T> wide(static_cast<std::size_t>(rows * cols), zero);
  auto at = [cols](std::int64_t i, std::int64_t j) { return static_cast<std::size_t>(i * cols + j); };

  for (std::int64_t i1 = 0; i1 < e; ++i1) {
    for (std::int64_t j1 = 0; j1 < f; ++j1) {
      const T& x = a[field.index(i1, j1)];
      if (is_exact_zero(x)) continue;
      for (std::int64_t i2 = 0; i2 < e; ++i2) {
        for (std::int64_t j2 = 0; j2 < f; ++j2) {
          const T& y = b[field.index(i2, j2)];
          if (is_exact_zero(y)) continue;
          auto& slot = wide[at(i1 + i2, j1 + j2)];
          slot = slot + x * y;
        }
      }
    }
  }

  // gamma^f = -sum_{k<f} g_k gamma^k
  for (std::int64_t i = 0; i < rows; ++i) {
    for (std::int64_t j = cols - 1; j >= f; --j) {
      const T top = wide[at(i, j)];
      if (is_exact_zero(top)) continue;
      for (std::int64_t k = 0; k < f; ++k) {
        const auto& g = field.gamma_poly[static_cast<std::size_t>(k)];
        if (g == 0) continue;
        auto& slot = wide[at(i, j - f + k)];
        slot = slot + scale(top, Rational(-g));
      }
      wide[at(i, j)] = zero;
    }
  }

  // beta^{e+k} = r beta^k
  for (std::int64_t i = rows - 1; i >= e; --i) {
    for (std::int64_t j = 0; j < f; ++j) {
      const T& top = wide[at(i, j)];
      if (is_exact_zero(top)) continue;
      auto& slot = wide[at(i - e, j)];
      slot = slot + scale(top, field.ramifier);
    }
  }

  std::vector<T> out;
  out.reserve(static_cast<std::size_t>(e * f));
  for (std::int64_t i = 0; i < e; ++i) {
    for (std::int64_t j = 0; j < f; ++j) out.push_back(wide[at(i, j)]);
  }
  return out;
}

}  // namespace qpcf::detail
