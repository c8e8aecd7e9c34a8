#include "qpcf/series.hpp"

#include <cmath>
#include <deque>

#include "qpcf/error.hpp"

namespace qpcf {

namespace {

constexpr std::size_t kRatioWindow = 8;
constexpr std::int64_t kDivergenceCheck = 200;
// An all-zero prefix this long is accepted as an identically zero series.
constexpr std::int64_t kZeroRun = 64;

void compositions(std::int64_t total, std::int64_t parts, std::vector<std::int64_t>& prefix,
                  const std::function<void(const std::vector<std::int64_t>&)>& visit) {
  if (parts == 1) {
    prefix.push_back(total);
    visit(prefix);
    prefix.pop_back();
    return;
  }
  for (std::int64_t first = 1; first <= total - (parts - 1); ++first) {
    prefix.push_back(first);
    compositions(total - first, parts - 1, prefix, visit);
    prefix.pop_back();
  }
}

}  // namespace

SeriesResult sum_series(const std::function<double(std::int64_t)>& term, std::int64_t first,
                        double tolerance, std::int64_t max_terms) {
  SeriesResult out;
  std::deque<double> ratios;
  double previous = 0;
  for (std::int64_t n = first; n < first + max_terms; ++n) {
    const double a = term(n);
    if (!std::isfinite(a)) throw NotIntegrable("series term is not finite at n = " + std::to_string(n));
    out.value += a;
    ++out.terms;
    if (n > first) {
      double ratio = 0;
      if (previous != 0) {
        ratio = std::fabs(a / previous);
      } else if (a != 0) {
        ratio = INFINITY;
      }
      ratios.push_back(ratio);
      if (ratios.size() > kRatioWindow) ratios.pop_front();
    }
    previous = a;
    if (ratios.size() < kRatioWindow) continue;
    double rho = 0;
    for (double r : ratios) rho = std::max(rho, r);
    if (rho < 1) {
      out.tail_bound = std::fabs(a) * rho / (1 - rho);
      if (out.value != 0 && out.tail_bound <= tolerance * std::fabs(out.value)) return out;
      if (out.value == 0 && out.tail_bound == 0 && n >= first + kZeroRun) return out;
    } else if (out.terms >= kDivergenceCheck) {
      bool growing = true;
      for (double r : ratios) growing = growing && r >= 1;
      if (growing) throw NotIntegrable("series terms do not decay");
    }
  }
  throw NotIntegrable("series did not converge within " + std::to_string(max_terms) + " terms");
}

SeriesResult sum_tensor_series(const std::function<double(const std::vector<std::int64_t>&)>& term,
                               std::int64_t arity, double tolerance, std::int64_t max_shell) {
  if (arity < 1) throw PreconditionViolated("arity must be at least 1");
  auto shell = [&](std::int64_t total) {
    double sum = 0;
    std::vector<std::int64_t> prefix;
    compositions(total, arity, prefix, [&](const std::vector<std::int64_t>& idx) { sum += term(idx); });
    return sum;
  };
  return sum_series(shell, arity, tolerance, max_shell);
}

}  // namespace qpcf
