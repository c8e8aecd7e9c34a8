// Acceptance run: one PASS/FAIL line per criterion, exit status 0 only when all pass.
#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <thread>

#include "fields.hpp"
#include "oracles.hpp"
#include "qpcf/cf.hpp"
#include "qpcf/cli.hpp"
#include "qpcf/ergodic.hpp"
#include "qpcf/measure.hpp"
#include "qpcf/rng.hpp"

using namespace qpcf;
using fields::q;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void criterion(int number, const char* name, const std::function<Outcome()>& body) {
  const auto t0 = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail = std::string("exception: ") + e.what();
  }
  failures += !o.pass;
  std::printf("%s %d %s: %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", number, name, o.detail.c_str(), seconds_since(t0));
  std::fflush(stdout);
}

ZElement z(const Field& f, const Rational& r) { return ZElement(ExactElement::scalar(f, r)); }

int threads() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

Outcome exact_identities() {
  const auto t0 = Clock::now();
  const std::vector<Field> fs = {fields::q3(), fields::q5(), fields::q3i(), fields::q5b()};
  std::mt19937_64 rng(2024);
  std::int64_t checked = 0;
  std::int64_t bad = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const Field& field = fs[static_cast<std::size_t>(trial) % fs.size()];
    const ExactElement alpha = fields::random_nonzero(field, rng, 10000);
    const CFExpansion e = expand(alpha, 40);
    const auto cv = convergents(e.quotients);
    ExactElement s_prev = ExactElement::one(field);
    ExactElement t_prev = ExactElement::zero(field);
    for (std::size_t k = 0; k < cv.size(); ++k) {
      const ExactElement det = cv[k].t * s_prev - cv[k].s * t_prev;
      bad += det != ExactElement::scalar(field, q(k % 2 ? -1 : 1));
      s_prev = cv[k].s;
      t_prev = cv[k].t;
      ++checked;
    }
    for (std::size_t k = 0; k + 1 < cv.size(); ++k) {
      const AbsValue direct = (alpha - cv[k].s / cv[k].t).abs();
      const AbsValue predicted = (cv[k].t.abs() * cv[k + 1].t.abs()).reciprocal();
      bad += direct != predicted;
      bad += approximation_error(alpha, e, cv, static_cast<std::int64_t>(k)) != predicted;
      ++checked;
    }
  }
  const double t = seconds_since(t0);
  std::ostringstream d;
  d << "500 expansions, " << checked << " identities checked, " << bad << " mismatches, " << t << "s (limit 30s)";
  return {bad == 0 && t < 30, d.str()};
}

std::int64_t ipow(std::int64_t b, std::int64_t k) {
  std::int64_t r = 1;
  while (k-- > 0) r *= b;
  return r;
}

Outcome counting() {
  std::int64_t cases = 0;
  std::int64_t bad = 0;
  for (std::int64_t p : {3, 5}) {
    for (auto [e, f] : std::vector<std::pair<int, int>>{{1, 1}, {2, 1}, {1, 2}}) {
      const Field field = make_field(p, e, f, q(1, p), DigitVariant::Ruban);
      for (const auto& shell : enumerate_zstar(3, field)) {
        const std::int64_t expected = ipow(p, f * shell.n) * (ipow(p, f) - 1);
        bad += static_cast<std::int64_t>(shell.elements.size()) != expected;
        ++cases;
      }
    }
  }
  return {bad == 0 && cases == 18, std::to_string(cases) + " shells, " + std::to_string(bad) + " mismatches"};
}

std::vector<ZElement> pool(const Field& field, std::int64_t max_n) {
  std::vector<ZElement> out;
  for (const auto& shell : enumerate_zstar(max_n, field)) out.insert(out.end(), shell.elements.begin(), shell.elements.end());
  return out;
}

std::vector<ZElement> random_list(const std::vector<ZElement>& from, std::mt19937_64& rng, std::size_t max_len) {
  std::vector<ZElement> out;
  const std::size_t len = 1 + rng() % max_len;
  for (std::size_t k = 0; k < len; ++k) out.push_back(from[rng() % from.size()]);
  return out;
}

Outcome measure_identities() {
  std::mt19937_64 rng(7);
  std::int64_t bad = 0;
  std::int64_t pairs = 0;
  std::int64_t sums = 0;
  for (const Field& field : {fields::q3(), fields::q3i(), fields::q5b()}) {
    const auto zs = pool(field, 2);
    for (int trial = 0; trial < 100; ++trial) {
      const auto c = random_list(zs, rng, 3);
      const auto d = random_list(zs, rng, 3);
      auto cd = c;
      cd.insert(cd.end(), d.begin(), d.end());
      bad += ball_measure(cylinder(field, cd)) != cylinder_measure(field, c) * cylinder_measure(field, d);
      bad += !product_identity_check(field, c, d);
      ++pairs;
    }
    const std::int64_t direct_limit = field->degree() == 1 ? 6 : 3;
    for (int trial = 0; trial < 5; ++trial) {
      const auto c = random_list(zs, rng, 2);
      const Rational mu = cylinder_measure(field, c);
      Rational direct = 0;
      const auto shells = enumerate_zstar(direct_limit, field);
      for (std::int64_t N = 1; N <= 6; ++N) {
        const Rational expected = mu * (1 - rational_power(field->p, -field->f * N));
        bad += preservation_partial_sum(field, c, N) != expected;
        if (N <= direct_limit) {
          for (const auto& x : shells[static_cast<std::size_t>(N - 1)].elements) {
            std::vector<ZElement> list{x};
            list.insert(list.end(), c.begin(), c.end());
            direct += ball_measure(cylinder(field, list));
          }
          bad += direct != expected;
        }
        ++sums;
      }
    }
  }
  return {bad == 0, std::to_string(pairs) + " product pairs, " + std::to_string(sums) + " partial sums, " +
                        std::to_string(bad) + " mismatches"};
}

Outcome finiteness() {
  const auto t0 = Clock::now();
  struct Case {
    std::int64_t p;
    std::vector<long> poly;
  };
  const std::vector<Case> cases = {{3, {1, 0, 1}}, {7, {1, 0, 1}}, {11, {1, 0, 1}}, {5, {1, 1, 1}}, {17, {1, 1, 1}}};
  std::int64_t bad = 0;
  std::int64_t longest = 0;
  std::int64_t total = 0;
  for (const auto& c : cases) {
    std::vector<Integer> poly;
    for (long x : c.poly) poly.emplace_back(x);
    const Field field = make_field(c.p, 1, 2, q(1, c.p), DigitVariant::Browkin, poly);
    const bool gaussian = c.poly[1] == 0;
    const Rational p2 = Rational(c.p * c.p);
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const ExactElement alpha = random_element(field, 1000, derive_seed(500 + static_cast<std::uint64_t>(c.p), seed));
      const FinitenessCertificate cert = finiteness_test(alpha, 10000);
      bool ok = cert.valid() && cert.y.back().is_zero();
      for (std::size_t k = 1; k < cert.quotients.size(); ++k) {
        const Rational h2 = galois_height_squared(cert.quotients[k].value());
        ok = ok && (gaussian ? 2 * h2 <= p2 : 4 * h2 <= 3 * p2);
      }
      for (std::size_t k = 0; k < cert.y.size(); ++k) {
        const ExactElement reduced = cert.y[k].scaled(rational_power(c.p, -static_cast<std::int64_t>(k)));
        for (const auto& coeff : reduced.coeffs()) ok = ok && coeff.get_den() == 1;
      }
      bad += !ok;
      longest = std::max(longest, cert.steps);
      ++total;
    }
  }
  const double t = seconds_since(t0);
  std::ostringstream d;
  d << total << " elements, " << bad << " failed, longest " << longest << " steps, " << t << "s (limit 300s)";
  return {bad == 0 && t < 300, d.str()};
}

struct ErgodicSetup {
  Field field;
  std::vector<ZElement> freq_targets;
};

Ensemble q3_ensemble;

Outcome ergodic_limits() {
  const auto t0 = Clock::now();
  const Field q3 = fields::q3();
  const Field q3i = fields::q3i(DigitVariant::Ruban);
  const std::vector<ErgodicSetup> setups = {
      {q3, {z(q3, q(1, 3)), z(q3, q(2, 3)), z(q3, q(4, 3)), z(q3, q(5, 3)), z(q3, q(1, 9))}},
      {q3i, {ZElement(ExactElement(q3i, {q(0), q(1, 3)})), ZElement(ExactElement(q3i, {q(1, 3), q(1, 3)}))}},
  };
  const std::vector<std::pair<std::string, std::function<StatReport(const Ensemble&, const StatSpec&)>>> samplings = {
      {"identity", [](const Ensemble& e, const StatSpec& s) { return evaluate(e, s, IndexSequence::identity()); }},
      {"squares", [](const Ensemble& e, const StatSpec& s) { return evaluate(e, s, IndexSequence::squares()); }},
      {"primes", [](const Ensemble& e, const StatSpec& s) { return evaluate(e, s, IndexSequence::primes()); }},
      {"window n,n", [](const Ensemble& e, const StatSpec& s) { return evaluate(e, s, MovingWindow::parse("n,n")); }},
  };
  int total = 0;
  int inside = 0;
  double worst = 0;
  for (const auto& setup : setups) {
    EnsembleConfig config(setup.field);
    config.samples = 200;
    config.steps = 2000;
    config.seed = 1;
    config.threads = threads();
    config.targets = setup.freq_targets;
    Ensemble ens = run_ensemble(config);

    std::vector<StatSpec> specs;
    specs.push_back(StatSpec::freq_quotient(setup.freq_targets[0]));
    specs.push_back(StatSpec::freq_quotient(setup.freq_targets[1]));
    specs.push_back(StatSpec::mean_neg_valuation());
    for (std::int64_t l = 1; l <= 3; ++l) specs.push_back(StatSpec::freq_abs(AbsMode::Eq, l));
    specs.push_back(StatSpec::generalized_mean(MonotoneTransform::parse("log_p", setup.field->p)));
    for (const auto& spec : specs) {
      for (const auto& [name, eval] : samplings) {
        const StatReport r = eval(ens, spec);
        const bool ok = r.within(3);
        ++total;
        inside += ok;
        worst = std::max(worst, std::fabs(r.z_score()));
        std::printf("  %-4s %-10s %-14s %-28s emp %.6f theory %.6f se %.6f z %+.2f n %lld\n", ok ? "ok" : "out",
                    setup.field->name().c_str(), r.stat.c_str(), (name + " " + r.params.dump()).c_str(), r.empirical,
                    r.theory.value, r.std_err, r.z_score(), static_cast<long long>(r.n_obs));
      }
    }
    if (setup.field->degree() == 1) q3_ensemble = std::move(ens);
  }
  const double t = seconds_since(t0);
  std::ostringstream d;
  d << inside << "/" << total << " within 3 SE, max |z| " << worst << ", " << t << "s (limit 600s)";
  return {inside == total && t < 600, d.str()};
}

Outcome mixing() {
  if (q3_ensemble.trajectories.empty()) return {false, "no Q_3 ensemble"};
  const Field& f = q3_ensemble.field;
  const ZElement a = z(f, q(1, 3));
  const ZElement b = z(f, q(2, 3));
  const ZElement c = z(f, q(4, 3));
  const ZElement d = z(f, q(5, 3));
  const ZElement e = z(f, q(1, 9));
  const std::vector<std::pair<std::vector<ZElement>, std::vector<ZElement>>> pairs = {
      {{a}, {a}}, {{b}, {c}}, {{a, b}, {d}}, {{c}, {a, a}}, {{e}, {b}}};
  int inside = 0;
  double worst = 0;
  for (const auto& [cs, ds] : pairs) {
    const MixingReport r = mixing_check(q3_ensemble, cs, ds);
    inside += std::fabs(r.z_score()) <= 3;
    worst = std::max(worst, std::fabs(r.z_score()));
    std::string label;
    for (const auto& x : cs) label += x.to_string() + " ";
    label += "|";
    for (const auto& x : ds) label += " " + x.to_string();
    std::printf("  %-4s %-16s emp %.6f theory %.6f se %.6f z %+.2f n %lld\n", std::fabs(r.z_score()) <= 3 ? "ok" : "out",
                label.c_str(), r.empirical, r.theoretical.get_d(), r.std_err, r.z_score(), static_cast<long long>(r.n_obs));
  }
  std::ostringstream o;
  o << inside << "/5 cylinder pairs within 3 SE, max |z| " << worst;
  return {inside == 5, o.str()};
}

Outcome reproducibility() {
  const std::vector<std::vector<std::string>> commands = {
      {"expand", "--p", "3", "--f", "2", "--gamma", "i", "--variant", "browkin", "--alpha", "(1-i)/2"},
      {"expand", "--p", "5", "--e", "2", "--r", "1/15", "--alpha", "-beta/4", "--precision", "40", "--max-steps", "20"},
      {"finiteness", "--p", "7", "--f", "2", "--gamma", "i", "--variant", "browkin", "--count", "20"},
      {"enumerate", "--p", "5", "--e", "2", "--max-n", "2", "--list"},
      {"measures", "--p", "3", "--cylinder", "1/3,1/3", "--then", "2/9", "--cutoff", "5"},
      {"ergodic", "--p", "3", "--stat", "gen-mean", "--F", "log_p", "--samples", "16", "--steps", "200", "--seed", "4"},
      {"ergodic", "--p", "3", "--f", "2", "--stat", "freq-abs", "--l", "1", "--samples", "8", "--steps", "100",
       "--window", "n,n", "--format", "csv"},
      {"ergodic", "--p", "3", "--stat", "mixing", "--c", "1/3", "--d", "2/3", "--samples", "8", "--steps", "100"},
      {"limits", "--p", "3", "--stat", "window-mean", "--H", "log-sum:2"},
  };
  int same = 0;
  for (const auto& args : commands) {
    std::ostringstream o1, e1, o2, e2;
    const int c1 = cli::run(args, o1, e1);
    const int c2 = cli::run(args, o2, e2);
    same += c1 == c2 && c1 == 0 && o1.str() == o2.str() && e1.str() == e2.str() && !o1.str().empty();
  }
  return {same == static_cast<int>(commands.size()),
          std::to_string(same) + "/" + std::to_string(commands.size()) + " commands byte-identical on rerun"};
}

}  // namespace

int main() {
  criterion(1, "exact identity suite", exact_identities);
  criterion(2, "Z* counting", counting);
  criterion(3, "measure identities", measure_identities);
  criterion(4, "finiteness", finiteness);
  criterion(5, "ergodic limits", ergodic_limits);
  criterion(6, "mixing", mixing);
  criterion(7, "reproducibility", reproducibility);
  std::printf("summary: %d of 7 criteria failed\n", failures);
  return failures ? 1 : 0;
}
