#include "qpcf/ergodic.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "qpcf/error.hpp"
#include "qpcf/measure.hpp"
#include "qpcf/rng.hpp"
#include "qpcf/series.hpp"

namespace qpcf {

namespace {

constexpr int kMaxRestarts = 12;

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = text.find(sep, start);
    out.push_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::int64_t parse_int(std::string_view text, const char* what) {
  std::int64_t value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw PreconditionViolated(std::string("invalid ") + what + ": '" + std::string(text) + "'");
  }
  return value;
}

double parse_double(std::string_view text, const char* what) {
  try {
    std::size_t used = 0;
    const double value = std::stod(std::string(text), &used);
    if (used != text.size()) throw std::invalid_argument("trailing");
    return value;
  } catch (const std::exception&) {
    throw PreconditionViolated(std::string("invalid ") + what + ": '" + std::string(text) + "'");
  }
}

Rational mean_neg_valuation_exact(const FieldParams& field) {
  const Integer q = prime_power(field.p, field.f);
  Rational out(q, (q - 1) * field.e);
  out.canonicalize();
  return out;
}

double abs_value(std::int64_t exponent, const FieldParams& field) {
  return std::pow(static_cast<double>(field.p), static_cast<double>(exponent) / field.e);
}

// (p^f - 1) p^{-f n}: Haar mass of {|c_1| = p^{n/e}}.
double shell_weight(std::int64_t n, const FieldParams& field) {
  const double q = std::pow(static_cast<double>(field.p), static_cast<double>(field.f));
  return (q - 1) * std::pow(q, -static_cast<double>(n));
}

struct Accumulator {
  double sum = 0;
  std::int64_t count = 0;
};

struct Pooled {
  double mean = 0;
  double std_err = 0;
  std::int64_t n_obs = 0;
};

// Pooled mean with batch-means standard error over contiguous groups of trajectories.
Pooled pool(const std::vector<Accumulator>& per_trajectory) {
  Pooled out;
  double total = 0;
  for (const auto& a : per_trajectory) {
    total += a.sum;
    out.n_obs += a.count;
  }
  if (out.n_obs == 0) throw PreconditionViolated("no observations: steps too small for the sampling");
  out.mean = total / static_cast<double>(out.n_obs);
  const auto n = static_cast<std::int64_t>(per_trajectory.size());
  const std::int64_t batches = std::min<std::int64_t>(kBatches, n);
  if (batches < 2) return out;
  std::vector<double> means;
  for (std::int64_t b = 0; b < batches; ++b) {
    const std::int64_t lo = b * n / batches;
    const std::int64_t hi = (b + 1) * n / batches;
    Accumulator acc;
    for (std::int64_t t = lo; t < hi; ++t) {
      acc.sum += per_trajectory[static_cast<std::size_t>(t)].sum;
      acc.count += per_trajectory[static_cast<std::size_t>(t)].count;
    }
    if (acc.count > 0) means.push_back(acc.sum / static_cast<double>(acc.count));
  }
  if (means.size() < 2) return out;
  double centre = 0;
  for (double m : means) centre += m;
  centre /= static_cast<double>(means.size());
  double var = 0;
  for (double m : means) var += (m - centre) * (m - centre);
  var /= static_cast<double>(means.size() - 1);
  out.std_err = std::sqrt(var / static_cast<double>(means.size()));
  return out;
}

std::int16_t target_index(const Ensemble& ensemble, const ZElement& z) {
  for (std::size_t k = 0; k < ensemble.targets.size(); ++k) {
    if (ensemble.targets[k] == z) return static_cast<std::int16_t>(k);
  }
  throw PreconditionViolated(z.to_string() + " is not a tracked quotient of this ensemble");
}

std::vector<std::int64_t> sieve_primes(std::int64_t limit) {
  std::vector<std::int64_t> out;
  if (limit < 2) return out;
  std::vector<bool> composite(static_cast<std::size_t>(limit + 1), false);
  for (std::int64_t n = 2; n <= limit; ++n) {
    if (composite[static_cast<std::size_t>(n)]) continue;
    out.push_back(n);
    for (std::int64_t m = n * n; m <= limit; m += n) composite[static_cast<std::size_t>(m)] = true;
  }
  return out;
}

StatReport evaluate_indices(const Ensemble& ensemble, const StatSpec& spec,
                            const std::vector<std::int64_t>& indices, std::string sampling) {
  const FieldParams& field = *ensemble.field;
  const Theory theory = theoretical_limit(spec, field);
  const std::int64_t arity = spec.arity();
  std::int16_t tz = -1;
  if (spec.kind == StatKind::FreqQuotient) tz = target_index(ensemble, *spec.z);

  std::vector<Accumulator> per;
  per.reserve(ensemble.trajectories.size());
  for (const auto& traj : ensemble.trajectories) {
    Accumulator acc;
    const auto len = static_cast<std::int64_t>(traj.exponents.size());
    for (std::int64_t a : indices) {
      if (a < 1 || a + arity - 1 > len) continue;
      const auto j = static_cast<std::size_t>(a - 1);
      const std::int64_t n = traj.exponents[j];
      double g = 0;
      switch (spec.kind) {
        case StatKind::FreqQuotient: g = traj.target[j] == tz ? 1 : 0; break;
        case StatKind::MeanNegVal: g = static_cast<double>(n) / field.e; break;
        case StatKind::FreqAbs:
          if (spec.mode == AbsMode::Eq) g = n == spec.l;
          if (spec.mode == AbsMode::Ge) g = n >= spec.l;
          if (spec.mode == AbsMode::Range) g = n >= spec.k && n < spec.l;
          break;
        case StatKind::GeneralizedMean: g = spec.transform->f(abs_value(n, field)); break;
        case StatKind::WindowMean: {
          std::vector<std::int64_t> window(traj.exponents.begin() + static_cast<std::ptrdiff_t>(j),
                                           traj.exponents.begin() + static_cast<std::ptrdiff_t>(j) + arity);
          g = spec.window_function->h(window, field);
          break;
        }
      }
      acc.sum += g;
      ++acc.count;
    }
    per.push_back(acc);
  }
  const Pooled pooled = pool(per);

  StatReport report;
  report.stat = spec.id();
  report.params = spec.params();
  report.sampling = std::move(sampling);
  report.theory = theory;
  report.n_obs = pooled.n_obs;
  report.seed = ensemble.seed;
  report.samples = static_cast<std::int64_t>(ensemble.trajectories.size());
  report.steps = ensemble.steps;
  report.quotients = ensemble.quotients();
  report.field = ensemble.field;
  report.empirical = pooled.mean;
  report.std_err = pooled.std_err;
  if (spec.kind == StatKind::GeneralizedMean) {
    const auto& inv = spec.transform->inverse;
    const double h = 1e-6 * std::max(1.0, std::fabs(pooled.mean));
    const double slope = (inv(pooled.mean + h) - inv(pooled.mean - h)) / (2 * h);
    report.empirical = inv(pooled.mean);
    report.std_err = std::fabs(slope) * pooled.std_err;
  }
  return report;
}

}  // namespace

ExactElement gauss_map(const ExactElement& a) {
  if (a.is_zero()) return a;
  if (a.abs().exponent() >= 0) throw PreconditionViolated("the map T is defined on B(0,1)");
  const ExactElement inv = a.inverse();
  return inv - inv.floor().value();
}

ExtElement gauss_map(const ExtElement& a) {
  if (a.is_exact_zero()) return a;
  if (a.abs().exponent() >= 0) throw PreconditionViolated("the map T is defined on B(0,1)");
  const ExtElement inv = a.inverse();
  return inv - ExtElement::from_z(inv.floor());
}

std::vector<ZElement> trajectory_quotients(const ExactElement& a, std::int64_t steps) {
  if (!a.is_zero() && a.abs().exponent() >= 0) {
    throw PreconditionViolated("trajectories start in B(0,1)");
  }
  std::vector<ZElement> out;
  ExactElement x = a;
  for (std::int64_t k = 0; k < steps && !x.is_zero(); ++k) {
    const ExactElement inv = x.inverse();
    ZElement c = inv.floor();
    x = inv - c.value();
    out.push_back(std::move(c));
  }
  return out;
}

std::int64_t initial_precision(const FieldParams& field, std::int64_t steps) {
  const double mean = mean_neg_valuation_exact(field).get_d();
  return static_cast<std::int64_t>(std::ceil(static_cast<double>(steps) * 2 * mean * 1.3)) + 64;
}

TrajectoryRun trajectory_quotients(const HaarSampler& sampler, std::int64_t steps,
                                   std::int64_t precision) {
  if (steps < 1) throw PreconditionViolated("steps must be at least 1");
  TrajectoryRun run;
  run.precision = precision > 0 ? precision : initial_precision(*sampler.field(), steps);
  for (;; ++run.restarts) {
    try {
      ExtElement a = sampler.sample(run.precision);
      run.quotients.clear();
      run.quotients.reserve(static_cast<std::size_t>(steps));
      for (std::int64_t k = 0; k < steps; ++k) {
        if (a.is_zero_at_precision()) throw PrecisionExhausted("trajectory reached zero at precision");
        const ExtElement inv = a.inverse();
        ZElement c = inv.floor();
        a = inv - ExtElement::from_z(c);
        run.quotients.push_back(std::move(c));
      }
      return run;
    } catch (const PrecisionExhausted&) {
      if (run.restarts >= kMaxRestarts) throw;
      run.precision *= 2;
    }
  }
}

// ---------------------------------------------------------------------------

IndexSequence IndexSequence::custom(std::vector<std::int64_t> terms) {
  for (std::size_t k = 0; k < terms.size(); ++k) {
    if (terms[k] < 1 || (k > 0 && terms[k] <= terms[k - 1])) {
      throw PreconditionViolated("index sequences must be strictly increasing positive integers");
    }
  }
  return IndexSequence(IndexKind::Custom, std::move(terms));
}

IndexSequence IndexSequence::parse(std::string_view text) {
  if (text == "identity") return identity();
  if (text == "squares") return squares();
  if (text == "primes") return primes();
  if (text.starts_with("custom:")) {
    std::vector<std::int64_t> terms;
    for (auto part : split(text.substr(7), ',')) terms.push_back(parse_int(part, "index term"));
    return custom(std::move(terms));
  }
  throw PreconditionViolated("unknown index sequence '" + std::string(text) + "'");
}

std::string IndexSequence::description() const {
  switch (kind_) {
    case IndexKind::Identity: return "identity";
    case IndexKind::Squares: return "squares";
    case IndexKind::Primes: return "primes";
    case IndexKind::Custom: break;
  }
  std::string out = "custom:";
  for (std::size_t k = 0; k < custom_.size(); ++k) out += (k ? "," : "") + std::to_string(custom_[k]);
  return out;
}

std::vector<std::int64_t> IndexSequence::terms(std::int64_t limit) const {
  std::vector<std::int64_t> out;
  switch (kind_) {
    case IndexKind::Identity:
      for (std::int64_t n = 1; n <= limit; ++n) out.push_back(n);
      break;
    case IndexKind::Squares:
      for (std::int64_t n = 1; n * n <= limit; ++n) out.push_back(n * n);
      break;
    case IndexKind::Primes: out = sieve_primes(limit); break;
    case IndexKind::Custom:
      for (auto a : custom_) {
        if (a <= limit) out.push_back(a);
      }
      break;
  }
  return out;
}

MovingWindow MovingWindow::linear(std::int64_t offset_scale, std::int64_t offset) {
  if (offset_scale < 0 || offset < 0) throw PreconditionViolated("window offsets must be non-negative");
  MovingWindow w;
  w.scale_ = offset_scale;
  w.offset_ = offset;
  return w;
}

MovingWindow MovingWindow::custom(std::vector<std::pair<std::int64_t, std::int64_t>> pairs) {
  if (pairs.empty()) throw PreconditionViolated("custom window needs at least one pair");
  for (const auto& [a, b] : pairs) {
    if (a < 0 || b < 1) throw PreconditionViolated("window pairs need a >= 0 and b >= 1");
  }
  MovingWindow w;
  w.pairs_ = std::move(pairs);
  return w;
}

MovingWindow MovingWindow::parse(std::string_view text) {
  if (text.starts_with("custom:")) {
    std::vector<std::pair<std::int64_t, std::int64_t>> pairs;
    for (auto item : split(text.substr(7), ';')) {
      const auto parts = split(item, ':');
      if (parts.size() != 2) throw PreconditionViolated("custom window pairs are written a:b");
      pairs.emplace_back(parse_int(parts[0], "window offset"), parse_int(parts[1], "window length"));
    }
    return custom(std::move(pairs));
  }
  const auto parts = split(text, ',');
  if (parts.size() != 2 || parts[1] != "n") {
    throw PreconditionViolated("window must look like 'n,n', '0,n', '2n,n' or 'custom:a:b;...'");
  }
  std::string_view left = parts[0];
  if (left.ends_with("n")) {
    left.remove_suffix(1);
    return linear(left.empty() ? 1 : parse_int(left, "window scale"), 0);
  }
  return linear(0, parse_int(left, "window offset"));
}

std::string MovingWindow::description() const {
  if (!pairs_.empty()) {
    std::string out = "custom:";
    for (std::size_t k = 0; k < pairs_.size(); ++k) {
      out += (k ? ";" : "") + std::to_string(pairs_[k].first) + ":" + std::to_string(pairs_[k].second);
    }
    return out;
  }
  if (scale_ == 0) return std::to_string(offset_) + ",n";
  return (scale_ == 1 ? std::string() : std::to_string(scale_)) + "n" +
         (offset_ ? "+" + std::to_string(offset_) : std::string()) + ",n";
}

std::optional<std::pair<std::int64_t, std::int64_t>> MovingWindow::last_admissible(
    std::int64_t steps, std::int64_t arity) const {
  if (!pairs_.empty()) {
    for (auto it = pairs_.rbegin(); it != pairs_.rend(); ++it) {
      if (it->first + it->second + arity - 1 <= steps) return *it;
    }
    return std::nullopt;
  }
  const std::int64_t n = floor_div(steps - offset_ - arity + 1, scale_ + 1);
  if (n < 1) return std::nullopt;
  return std::make_pair(scale_ * n + offset_, n);
}

MonotoneTransform MonotoneTransform::parse(std::string_view text, std::int64_t p) {
  const double lp = std::log(static_cast<double>(p));
  if (text == "log_p") {
    return {"log_p", [lp](double x) { return std::log(x) / lp; }, [lp](double y) { return std::exp(y * lp); }};
  }
  if (text == "ln") return {"ln", [](double x) { return std::log(x); }, [](double y) { return std::exp(y); }};
  if (text == "sqrt") return {"sqrt", [](double x) { return std::sqrt(x); }, [](double y) { return y * y; }};
  if (text == "identity") return {"identity", [](double x) { return x; }, [](double y) { return y; }};
  if (text.starts_with("pow:")) {
    const double a = parse_double(text.substr(4), "power");
    if (!(a > 0)) throw PreconditionViolated("pow transform needs a positive exponent");
    return {std::string(text), [a](double x) { return std::pow(x, a); },
            [a](double y) { return std::pow(y, 1 / a); }};
  }
  throw PreconditionViolated("unknown transform '" + std::string(text) + "'");
}

WindowFunction WindowFunction::parse(std::string_view text) {
  const auto parts = split(text, ':');
  const std::string_view kind = parts[0];
  auto arity_at = [&](std::size_t pos) -> std::int64_t {
    if (parts.size() <= pos) return 1;
    const std::int64_t k = parse_int(parts[pos], "arity");
    if (k < 1 || k > 6) throw PreconditionViolated("window function arity must be in 1..6");
    return k;
  };
  if (kind == "one") {
    return {std::string(text), arity_at(1), [](std::span<const std::int64_t>, const FieldParams&) { return 1.0; }};
  }
  if (kind == "level") {
    if (parts.size() < 2) throw PreconditionViolated("level needs a level: level:<l>[:<k>]");
    const std::int64_t l = parse_int(parts[1], "level");
    return {std::string(text), arity_at(2), [l](std::span<const std::int64_t> n, const FieldParams&) {
              return std::all_of(n.begin(), n.end(), [l](std::int64_t x) { return x == l; }) ? 1.0 : 0.0;
            }};
  }
  if (kind == "log-sum") {
    return {std::string(text), arity_at(1), [](std::span<const std::int64_t> n, const FieldParams& f) {
              double s = 0;
              for (auto x : n) s += static_cast<double>(x) / f.e;
              return s;
            }};
  }
  if (kind == "log-product") {
    return {std::string(text), arity_at(1), [](std::span<const std::int64_t> n, const FieldParams& f) {
              double s = 1;
              for (auto x : n) s *= static_cast<double>(x) / f.e;
              return s;
            }};
  }
  throw PreconditionViolated("unknown window function '" + std::string(text) + "'");
}

StatSpec StatSpec::freq_quotient(ZElement z) {
  if (!z.in_zstar()) throw NotInZStar(z.to_string() + " is not in Z*");
  StatSpec s;
  s.kind = StatKind::FreqQuotient;
  s.z = std::move(z);
  return s;
}

StatSpec StatSpec::mean_neg_valuation() { return StatSpec{}; }

StatSpec StatSpec::freq_abs(AbsMode mode, std::int64_t l, std::int64_t k) {
  if (l < 1) throw PreconditionViolated("level l must be positive");
  if (mode == AbsMode::Range && !(k >= 1 && k < l)) {
    throw PreconditionViolated("range needs 1 <= k < l");
  }
  StatSpec s;
  s.kind = StatKind::FreqAbs;
  s.mode = mode;
  s.l = l;
  s.k = k;
  return s;
}

StatSpec StatSpec::generalized_mean(MonotoneTransform transform) {
  StatSpec s;
  s.kind = StatKind::GeneralizedMean;
  s.transform = std::move(transform);
  return s;
}

StatSpec StatSpec::window_mean(WindowFunction h) {
  StatSpec s;
  s.kind = StatKind::WindowMean;
  s.window_function = std::move(h);
  return s;
}

std::string StatSpec::id() const {
  switch (kind) {
    case StatKind::FreqQuotient: return "freq-quotient";
    case StatKind::MeanNegVal: return "mean-neg-val";
    case StatKind::FreqAbs: return "freq-abs";
    case StatKind::GeneralizedMean: return "gen-mean";
    case StatKind::WindowMean: return "window-mean";
  }
  return "unknown";
}

nlohmann::json StatSpec::params() const {
  nlohmann::json out = nlohmann::json::object();
  switch (kind) {
    case StatKind::FreqQuotient: out["z"] = z->to_string(); break;
    case StatKind::MeanNegVal: break;
    case StatKind::FreqAbs:
      out["mode"] = mode == AbsMode::Eq ? "eq" : mode == AbsMode::Ge ? "ge" : "range";
      out["l"] = l;
      if (mode == AbsMode::Range) out["k"] = k;
      break;
    case StatKind::GeneralizedMean: out["F"] = transform->name; break;
    case StatKind::WindowMean:
      out["H"] = window_function->name;
      out["arity"] = window_function->arity;
      break;
  }
  return out;
}

std::int64_t StatSpec::arity() const {
  return kind == StatKind::WindowMean ? window_function->arity : 1;
}

Theory theoretical_limit(const StatSpec& spec, const FieldParams& field) {
  Theory out;
  const std::int64_t p = field.p;
  const std::int64_t f = field.f;
  switch (spec.kind) {
    case StatKind::FreqQuotient:
      out.exact = rational_power(p, -2 * f * spec.z->abs().exponent());
      break;
    case StatKind::MeanNegVal: out.exact = mean_neg_valuation_exact(field); break;
    case StatKind::FreqAbs: {
      const Rational q(prime_power(p, f));
      if (spec.mode == AbsMode::Eq) out.exact = (q - 1) * rational_power(p, -f * spec.l);
      if (spec.mode == AbsMode::Ge) out.exact = rational_power(p, -f * (spec.l - 1));
      if (spec.mode == AbsMode::Range) {
        out.exact = rational_power(p, -f * (spec.k - 1)) * (1 - rational_power(p, -f * (spec.l - spec.k)));
      }
      break;
    }
    case StatKind::GeneralizedMean: {
      const auto& F = spec.transform->f;
      sum_series([&](std::int64_t n) {
        const double v = F(abs_value(n, field));
        return v * v * shell_weight(n, field);
      });
      const SeriesResult mean =
          sum_series([&](std::int64_t n) { return F(abs_value(n, field)) * shell_weight(n, field); });
      out.value = spec.transform->inverse(mean.value);
      out.tail_bound = mean.tail_bound;
      return out;
    }
    case StatKind::WindowMean: {
      const auto& H = spec.window_function->h;
      const std::int64_t k = spec.window_function->arity;
      auto weight = [&](const std::vector<std::int64_t>& idx) {
        double w = 1;
        for (auto i : idx) w *= shell_weight(i, field);
        return w;
      };
      sum_tensor_series([&](const std::vector<std::int64_t>& idx) {
        const double v = H(idx, field);
        return v * v * weight(idx);
      }, k);
      const SeriesResult mean =
          sum_tensor_series([&](const std::vector<std::int64_t>& idx) { return H(idx, field) * weight(idx); }, k);
      out.value = mean.value;
      out.tail_bound = mean.tail_bound;
      return out;
    }
  }
  out.value = out.exact->get_d();
  return out;
}

// ---------------------------------------------------------------------------

std::int64_t Ensemble::quotients() const {
  std::int64_t n = 0;
  for (const auto& t : trajectories) n += static_cast<std::int64_t>(t.exponents.size());
  return n;
}

Ensemble run_ensemble(const EnsembleConfig& config) {
  if (config.samples < 1 || config.steps < 1) throw PreconditionViolated("samples and steps must be positive");
  if (config.targets.size() > static_cast<std::size_t>(std::numeric_limits<std::int16_t>::max())) {
    throw PreconditionViolated("too many tracked quotients");
  }
  Ensemble ensemble;
  ensemble.field = config.field;
  ensemble.steps = config.steps;
  ensemble.seed = config.seed;
  ensemble.targets = config.targets;
  ensemble.trajectories.resize(static_cast<std::size_t>(config.samples));

  std::atomic<std::int64_t> next{0};
  std::atomic<std::int64_t> done{0};
  std::mutex progress_mutex;
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&]() {
    for (;;) {
      const std::int64_t t = next.fetch_add(1);
      if (t >= config.samples) return;
      try {
        const HaarSampler sampler(config.field, derive_seed(config.seed, static_cast<std::uint64_t>(t)));
        TrajectoryRun run = trajectory_quotients(sampler, config.steps);
        TrajectoryRecord record;
        record.precision = run.precision;
        record.restarts = run.restarts;
        record.exponents.reserve(run.quotients.size());
        record.target.reserve(run.quotients.size());
        for (const auto& c : run.quotients) {
          record.exponents.push_back(static_cast<std::int32_t>(c.abs().exponent()));
          std::int16_t idx = -1;
          for (std::size_t k = 0; k < config.targets.size(); ++k) {
            if (config.targets[k] == c) idx = static_cast<std::int16_t>(k);
          }
          record.target.push_back(idx);
        }
        ensemble.trajectories[static_cast<std::size_t>(t)] = std::move(record);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = config.samples;
        return;
      }
      const std::int64_t finished = ++done;
      if (config.progress) {
        std::lock_guard lock(progress_mutex);
        config.progress(finished, config.samples);
      }
    }
  };

  const int threads = std::max(1, config.threads);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int k = 0; k < threads; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
  return ensemble;
}

StatReport evaluate(const Ensemble& ensemble, const StatSpec& spec, const IndexSequence& sequence) {
  const auto indices = sequence.terms(ensemble.steps - spec.arity() + 1);
  return evaluate_indices(ensemble, spec, indices, "index:" + sequence.description());
}

StatReport evaluate(const Ensemble& ensemble, const StatSpec& spec, const MovingWindow& window) {
  const auto pair = window.last_admissible(ensemble.steps, spec.arity());
  if (!pair) throw PreconditionViolated("no admissible window within the trajectory length");
  std::vector<std::int64_t> indices;
  for (std::int64_t j = 1; j <= pair->second; ++j) indices.push_back(pair->first + j);
  return evaluate_indices(ensemble, spec, indices,
                          "window:" + window.description() + "@a=" + std::to_string(pair->first) +
                              ",b=" + std::to_string(pair->second));
}

double StatReport::z_score() const {
  const double diff = empirical - theory.value;
  if (std_err > 0) return diff / std_err;
  return diff == 0 ? 0 : std::copysign(INFINITY, diff);
}

nlohmann::json StatReport::to_json() const {
  nlohmann::json out = {
      {"stat", stat},
      {"params", params},
      {"sampling", sampling},
      {"empirical", empirical},
      {"theoretical", theory.value},
      {"n_obs", n_obs},
      {"std_err", std_err},
      {"z_score", z_score()},
      {"seed", seed},
      {"samples", samples},
      {"steps", steps},
      {"quotients", quotients},
  };
  if (theory.exact) out["theoreticalExact"] = to_string(*theory.exact);
  if (theory.tail_bound > 0) out["seriesTailBound"] = theory.tail_bound;
  if (field) {
    out["field"] = qpcf::to_json(**field);
  }
  return out;
}

MixingReport mixing_check(const Ensemble& ensemble, const std::vector<ZElement>& c,
                          const std::vector<ZElement>& d) {
  if (c.empty() || d.empty()) throw PreconditionViolated("mixing check needs two nonempty cylinders");
  std::vector<std::int16_t> pattern;
  for (const auto& z : c) pattern.push_back(target_index(ensemble, z));
  for (const auto& z : d) pattern.push_back(target_index(ensemble, z));
  const auto len = static_cast<std::int64_t>(pattern.size());

  std::vector<Accumulator> per;
  for (const auto& traj : ensemble.trajectories) {
    Accumulator acc;
    const auto blocks = static_cast<std::int64_t>(traj.target.size()) / len;
    for (std::int64_t b = 0; b < blocks; ++b) {
      bool hit = true;
      for (std::int64_t k = 0; k < len && hit; ++k) {
        hit = traj.target[static_cast<std::size_t>(b * len + k)] == pattern[static_cast<std::size_t>(k)];
      }
      acc.sum += hit ? 1 : 0;
      ++acc.count;
    }
    per.push_back(acc);
  }
  const Pooled pooled = pool(per);
  MixingReport report;
  report.c = c;
  report.d = d;
  report.empirical = pooled.mean;
  report.std_err = pooled.std_err;
  report.n_obs = pooled.n_obs;
  report.theoretical = cylinder_measure(ensemble.field, c) * cylinder_measure(ensemble.field, d);
  return report;
}

double MixingReport::z_score() const {
  const double diff = empirical - theoretical.get_d();
  if (std_err > 0) return diff / std_err;
  return diff == 0 ? 0 : std::copysign(INFINITY, diff);
}

nlohmann::json MixingReport::to_json() const {
  nlohmann::json cs = nlohmann::json::array();
  nlohmann::json ds = nlohmann::json::array();
  for (const auto& z : c) cs.push_back(z.to_string());
  for (const auto& z : d) ds.push_back(z.to_string());
  return {{"stat", "mixing"},
          {"c", cs},
          {"d", ds},
          {"empirical", empirical},
          {"theoretical", theoretical.get_d()},
          {"theoreticalExact", to_string(theoretical)},
          {"n_obs", n_obs},
          {"std_err", std_err},
          {"z_score", z_score()}};
}

namespace {

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char ch : text) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + '"';
}

}  // namespace

std::string to_csv(const std::vector<StatReport>& reports) {
  std::ostringstream out;
  out.precision(17);
  out << "stat,sampling,params,empirical,theoretical,n_obs,std_err,z_score\n";
  for (const auto& r : reports) {
    out << r.stat << ',' << csv_field(r.sampling) << ',' << csv_field(r.params.dump()) << ',' << r.empirical << ','
        << r.theory.value << ',' << r.n_obs << ',' << r.std_err << ',' << r.z_score() << '\n';
  }
  return out.str();
}

}  // namespace qpcf
