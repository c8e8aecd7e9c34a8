#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qpcf/exact.hpp"
#include "qpcf/extension.hpp"
#include "qpcf/sampler.hpp"

namespace qpcf {

// T(a) = 1/a - floor(1/a), T(0) = 0, for |a| < 1.
ExactElement gauss_map(const ExactElement& a);
ExtElement gauss_map(const ExtElement& a);

// c_1..c_n of an exact point of B(0,1); stops early when T^k a = 0.
std::vector<ZElement> trajectory_quotients(const ExactElement& a, std::int64_t steps);

struct TrajectoryRun {
  std::vector<ZElement> quotients;
  std::int64_t precision = 0;  // coefficient precision of the successful pass
  int restarts = 0;
};

// Digits needed for `steps` quotients with some headroom.
std::int64_t initial_precision(const FieldParams& field, std::int64_t steps);

// c_1..c_n of a sampled point; restarts from the tape at doubled precision when digits run out.
TrajectoryRun trajectory_quotients(const HaarSampler& sampler, std::int64_t steps,
                                   std::int64_t precision = 0);

enum class IndexKind { Identity, Squares, Primes, Custom };

class IndexSequence {
 public:
  static IndexSequence identity() { return IndexSequence(IndexKind::Identity, {}); }
  static IndexSequence squares() { return IndexSequence(IndexKind::Squares, {}); }
  static IndexSequence primes() { return IndexSequence(IndexKind::Primes, {}); }
  static IndexSequence custom(std::vector<std::int64_t> terms);
  // "identity", "squares", "primes" or "custom:1,4,9"
  static IndexSequence parse(std::string_view text);

  IndexKind kind() const noexcept { return kind_; }
  std::string description() const;
  // Terms a_j <= limit.
  std::vector<std::int64_t> terms(std::int64_t limit) const;

 private:
  IndexSequence(IndexKind kind, std::vector<std::int64_t> custom)
      : kind_(kind), custom_(std::move(custom)) {}
  IndexKind kind_;
  std::vector<std::int64_t> custom_;
};

// Window pairs (a_n, b_n): the n-th average runs over c_{a_n+1} .. c_{a_n+b_n}.
class MovingWindow {
 public:
  // a_n = offset_scale * n + offset, b_n = n.
  static MovingWindow linear(std::int64_t offset_scale, std::int64_t offset);
  static MovingWindow custom(std::vector<std::pair<std::int64_t, std::int64_t>> pairs);
  // "n,n", "0,n", "1,n", "2n,n" or "custom:a:b;a:b"
  static MovingWindow parse(std::string_view text);

  std::string description() const;
  // The window with the largest n whose quotients (plus arity - 1 look-ahead) fit in `steps`.
  std::optional<std::pair<std::int64_t, std::int64_t>> last_admissible(std::int64_t steps,
                                                                       std::int64_t arity) const;

 private:
  MovingWindow() = default;
  std::int64_t scale_ = 1;
  std::int64_t offset_ = 0;
  std::vector<std::pair<std::int64_t, std::int64_t>> pairs_;
};

// Increasing F with its inverse, applied to |c|.
struct MonotoneTransform {
  std::string name;
  std::function<double(double)> f;
  std::function<double(double)> inverse;

  // "log_p", "ln", "sqrt", "identity", "pow:<a>"
  static MonotoneTransform parse(std::string_view text, std::int64_t p);
};

// H(|c_1|, ..., |c_k|), given the exponents n_i of |c_i| = p^{n_i/e}.
struct WindowFunction {
  std::string name;
  std::int64_t arity = 1;
  std::function<double(std::span<const std::int64_t>, const FieldParams&)> h;

  // "one:<k>", "level:<l>:<k>", "log-sum:<k>", "log-product:<k>"
  static WindowFunction parse(std::string_view text);
};

enum class StatKind { FreqQuotient, MeanNegVal, FreqAbs, GeneralizedMean, WindowMean };
enum class AbsMode { Eq, Ge, Range };

struct StatSpec {
  StatKind kind = StatKind::MeanNegVal;
  std::optional<ZElement> z;
  AbsMode mode = AbsMode::Eq;
  std::int64_t l = 1;
  std::int64_t k = 1;
  std::optional<MonotoneTransform> transform;
  std::optional<WindowFunction> window_function;

  static StatSpec freq_quotient(ZElement z);
  static StatSpec mean_neg_valuation();
  static StatSpec freq_abs(AbsMode mode, std::int64_t l, std::int64_t k = 1);
  static StatSpec generalized_mean(MonotoneTransform transform);
  static StatSpec window_mean(WindowFunction h);

  std::string id() const;
  nlohmann::json params() const;
  std::int64_t arity() const;
};

struct Theory {
  double value = 0;
  std::optional<Rational> exact;
  double tail_bound = 0;
};

// Closed forms where available, certified series otherwise; NotIntegrable on an L^2 failure.
Theory theoretical_limit(const StatSpec& spec, const FieldParams& field);

struct TrajectoryRecord {
  std::vector<std::int32_t> exponents;  // |c_j| = p^{exponents[j-1]/e}
  std::vector<std::int16_t> target;     // index into the tracked targets, or -1
  std::int64_t precision = 0;
  int restarts = 0;
};

struct EnsembleConfig {
  explicit EnsembleConfig(Field f) : field(std::move(f)) {}
  Field field;
  std::int64_t samples = 200;
  std::int64_t steps = 2000;
  std::uint64_t seed = 1;
  int threads = 1;
  std::vector<ZElement> targets;  // quotients whose occurrences are recorded
  std::function<void(std::int64_t, std::int64_t)> progress;
};

struct Ensemble {
  Field field;
  std::int64_t steps = 0;
  std::uint64_t seed = 0;
  std::vector<ZElement> targets;
  std::vector<TrajectoryRecord> trajectories;

  std::int64_t quotients() const;
};

// Trajectory t uses the sampler seeded with derive_seed(seed, t).
Ensemble run_ensemble(const EnsembleConfig& config);

struct StatReport {
  std::string stat;
  nlohmann::json params;
  std::string sampling;
  double empirical = 0;
  Theory theory;
  std::int64_t n_obs = 0;
  double std_err = 0;
  std::uint64_t seed = 0;
  std::int64_t samples = 0;
  std::int64_t steps = 0;
  std::int64_t quotients = 0;
  std::optional<Field> field;

  double z_score() const;
  bool within(double sigmas) const { return std::abs(z_score()) <= sigmas; }
  nlohmann::json to_json() const;
};

inline constexpr std::int64_t kBatches = 32;

StatReport evaluate(const Ensemble& ensemble, const StatSpec& spec, const IndexSequence& sequence);
StatReport evaluate(const Ensemble& ensemble, const StatSpec& spec, const MovingWindow& window);

struct MixingReport {
  std::vector<ZElement> c;
  std::vector<ZElement> d;
  double empirical = 0;
  Rational theoretical;
  double std_err = 0;
  std::int64_t n_obs = 0;

  double z_score() const;
  nlohmann::json to_json() const;
};

// Frequency of (alpha in Delta_c and T^{|c|} alpha in Delta_d) over non-overlapping blocks of
// each trajectory, against mu(Delta_c) mu(Delta_d). c and d must be tracked targets.
MixingReport mixing_check(const Ensemble& ensemble, const std::vector<ZElement>& c,
                          const std::vector<ZElement>& d);

std::string to_csv(const std::vector<StatReport>& reports);

}  // namespace qpcf
