#include "qpcf/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <iomanip>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qpcf/cf.hpp"
#include "qpcf/ergodic.hpp"
#include "qpcf/error.hpp"
#include "qpcf/literal.hpp"
#include "qpcf/measure.hpp"
#include "qpcf/rng.hpp"

namespace qpcf::cli {

namespace {

using nlohmann::json;

struct FieldOptions {
  std::int64_t p = 0;
  std::int64_t e = 1;
  std::int64_t f = 1;
  std::string r;
  std::string variant = "ruban";
  std::string gamma = "auto";
  std::string gamma_poly;
};

struct CommonOptions {
  std::string format = "json";
  bool timestamp = false;
  std::uint64_t seed = 1;
  int threads = 1;
};

struct StatOptions {
  std::string stat = "mean-neg-val";
  std::string z;
  std::string mode = "eq";
  std::int64_t l = 1;
  std::int64_t k = 1;
  std::string transform = "log_p";
  std::string window_function = "log-sum:1";
  std::string c;
  std::string d;
};

void add_field_options(CLI::App* app, FieldOptions& o) {
  app->add_option("--p", o.p, "prime")->required();
  app->add_option("--e", o.e, "ramification index")->capture_default_str();
  app->add_option("--f", o.f, "residue degree")->capture_default_str();
  app->add_option("--r", o.r, "ramifier r with beta^e = r, v_p(r) = -1 (default 1/p)");
  app->add_option("--variant", o.variant, "digit set")
      ->check(CLI::IsMember({"ruban", "browkin"}))
      ->capture_default_str();
  app->add_option("--gamma", o.gamma, "gamma: i (x^2+1), w (x^2+x+1) or auto")
      ->check(CLI::IsMember({"auto", "i", "w"}))
      ->capture_default_str();
  app->add_option("--gamma-poly", o.gamma_poly, "monic polynomial for gamma, ascending: c0,c1,...,1");
}

void add_common_options(CLI::App* app, CommonOptions& o, bool seeded) {
  app->add_option("--format", o.format)->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  app->add_flag("--timestamp", o.timestamp, "add a generation timestamp to JSON output");
  if (seeded) {
    app->add_option("--seed", o.seed, "master seed")->envname("QPCF_SEED")->capture_default_str();
    app->add_option("--threads", o.threads, "worker threads")->check(CLI::Range(1, 256))->capture_default_str();
  }
}

void add_stat_options(CLI::App* app, StatOptions& o) {
  app->add_option("--stat", o.stat)
      ->check(CLI::IsMember({"freq-quotient", "mean-neg-val", "freq-abs", "gen-mean", "window-mean", "mixing"}))
      ->capture_default_str();
  app->add_option("--z", o.z, "quotient literal for freq-quotient");
  app->add_option("--mode", o.mode, "freq-abs mode")->check(CLI::IsMember({"eq", "ge", "range"}))->capture_default_str();
  app->add_option("--l", o.l, "level l, |c| = p^{l/e}")->capture_default_str();
  app->add_option("--k", o.k, "lower level k for --mode range")->capture_default_str();
  app->add_option("--F", o.transform, "log_p, ln, sqrt, identity, pow:<a>")->capture_default_str();
  app->add_option("--H", o.window_function, "one:<k>, level:<l>:<k>, log-sum:<k>, log-product:<k>")
      ->capture_default_str();
  app->add_option("--c", o.c, "first cylinder for mixing, comma separated");
  app->add_option("--d", o.d, "second cylinder for mixing, comma separated");
}

std::vector<Integer> parse_poly(const std::string& text) {
  std::vector<Integer> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.emplace_back(item);
    } catch (const std::exception&) {
      throw PreconditionViolated("bad polynomial coefficient '" + item + "'");
    }
  }
  return out;
}

Field build_field(const FieldOptions& o) {
  std::vector<Integer> poly;
  if (!o.gamma_poly.empty()) {
    poly = parse_poly(o.gamma_poly);
  } else if (o.gamma != "auto") {
    if (o.f != 2) throw PreconditionViolated("--gamma " + o.gamma + " needs --f 2");
    if (o.gamma == "i") {
      if (o.p % 4 != 3) {
        throw PreconditionViolated("Q_" + std::to_string(o.p) + "(i) needs p = 3 mod 4 (x^2+1 splits otherwise)");
      }
      poly = {1, 0, 1};
    } else {
      if (o.p % 3 != 2) {
        throw PreconditionViolated("Q_" + std::to_string(o.p) + "(w) needs p = 2 mod 3 (x^2+x+1 splits otherwise)");
      }
      poly = {1, 1, 1};
    }
  }
  Rational r(1);
  if (!o.r.empty()) {
    try {
      r = parse_rational(o.r);
    } catch (const std::invalid_argument&) {
      throw PreconditionViolated("bad ramifier '" + o.r + "'");
    }
  } else if (o.p > 0) {
    r = Rational(1, static_cast<unsigned long>(o.p));
  }
  return make_field(o.p, o.e, o.f, r, parse_variant(o.variant), std::move(poly));
}

ExactElement literal(const Field& field, const std::string& text, const char* flag) {
  try {
    return parse_element(field, text);
  } catch (const ParseError& e) {
    throw ParseError(std::string(flag) + ":\n" + caret_diagnostic(text, e.position(), e.what()), e.position());
  }
}

std::vector<ZElement> quotient_list(const Field& field, const std::string& text, const char* flag) {
  std::vector<ExactElement> values;
  try {
    values = parse_element_list(field, text);
  } catch (const ParseError& e) {
    throw ParseError(std::string(flag) + ":\n" + caret_diagnostic(text, e.position(), e.what()), e.position());
  }
  std::vector<ZElement> out;
  for (auto& v : values) out.emplace_back(std::move(v));
  return out;
}

std::string timestamp_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream s;
  s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

void emit_json(std::ostream& out, json j, const CommonOptions& common) {
  if (common.timestamp) j["timestamp"] = timestamp_now();
  out << j.dump(2) << '\n';
}

std::string csv_number(double x) {
  std::ostringstream s;
  s.precision(17);
  s << x;
  return s.str();
}

StatSpec build_stat(const Field& field, const StatOptions& o) {
  if (o.stat == "freq-quotient") {
    if (o.z.empty()) throw PreconditionViolated("freq-quotient needs --z");
    return StatSpec::freq_quotient(ZElement(literal(field, o.z, "--z")));
  }
  if (o.stat == "mean-neg-val") return StatSpec::mean_neg_valuation();
  if (o.stat == "freq-abs") {
    const AbsMode mode = o.mode == "eq" ? AbsMode::Eq : o.mode == "ge" ? AbsMode::Ge : AbsMode::Range;
    return StatSpec::freq_abs(mode, o.l, o.k);
  }
  if (o.stat == "gen-mean") return StatSpec::generalized_mean(MonotoneTransform::parse(o.transform, field->p));
  if (o.stat == "window-mean") return StatSpec::window_mean(WindowFunction::parse(o.window_function));
  throw PreconditionViolated("unknown statistic '" + o.stat + "'");
}

// ---------------------------------------------------------------------------

int cmd_expand(const FieldOptions& fo, const CommonOptions& common, const std::string& alpha_text,
               std::int64_t max_steps, std::int64_t precision, std::ostream& out) {
  const Field field = build_field(fo);
  const ExactElement alpha = literal(field, alpha_text, "--alpha");
  const CFExpansion expansion =
      precision > 0 ? expand(ExtElement::from_exact(alpha, precision), max_steps) : expand(alpha, max_steps);
  if (common.format == "csv") {
    out << "k,quotient\n";
    for (std::size_t k = 0; k < expansion.quotients.size(); ++k) {
      out << k << ",\"" << expansion.quotients[k].to_string() << "\"\n";
    }
  } else {
    json j = to_json(expansion);
    j["alpha"] = alpha.to_string();
    j["mode"] = precision > 0 ? "stream" : "exact";
    if (precision > 0) j["precision"] = precision;
    emit_json(out, std::move(j), common);
  }
  const bool starved = expansion.status == CFStatus::PrecisionExhausted || expansion.status == CFStatus::ZeroAtPrecision;
  return starved ? 3 : 0;
}

int cmd_finiteness(const FieldOptions& fo, const CommonOptions& common, const std::string& alpha_text,
                   std::int64_t count, std::int64_t bound, std::int64_t max_steps, std::ostream& out) {
  const Field field = build_field(fo);
  check_finiteness_preconditions(*field);
  if (!alpha_text.empty()) {
    const FinitenessCertificate cert = finiteness_test(literal(field, alpha_text, "--alpha"), max_steps);
    json j = to_json(cert);
    j["field"] = to_json(*field);
    j["valid"] = cert.valid();
    if (common.format == "csv") {
      out << "alpha,terminated,steps,valid\n\"" << cert.alpha.to_string() << "\"," << cert.terminated << ','
          << cert.steps << ',' << cert.valid() << '\n';
    } else {
      emit_json(out, std::move(j), common);
    }
    return cert.valid() ? 0 : 1;
  }
  if (count < 1 || bound < 1) throw PreconditionViolated("--count and --bound must be positive");

  std::int64_t valid = 0;
  std::int64_t max_seen = 0;
  std::int64_t total_steps = 0;
  double max_height = 0;
  double quotient_bound = 0;
  std::ostringstream csv;
  csv << "index,alpha,steps,valid\n";
  for (std::int64_t t = 0; t < count; ++t) {
    const ExactElement alpha = random_element(field, bound, derive_seed(common.seed, static_cast<std::uint64_t>(t)));
    const FinitenessCertificate cert = finiteness_test(alpha, max_steps);
    valid += cert.valid();
    max_seen = std::max(max_seen, cert.steps);
    total_steps += cert.steps;
    max_height = std::max(max_height, cert.max_quotient_height);
    quotient_bound = cert.quotient_bound;
    csv << t << ",\"" << alpha.to_string() << "\"," << cert.steps << ',' << cert.valid() << '\n';
  }
  if (common.format == "csv") {
    out << csv.str();
  } else {
    emit_json(out,
              {{"field", to_json(*field)},
               {"count", count},
               {"bound", bound},
               {"seed", common.seed},
               {"terminated", count},
               {"valid", valid},
               {"maxSteps", max_seen},
               {"meanSteps", static_cast<double>(total_steps) / static_cast<double>(count)},
               {"maxQuotientHeight", max_height},
               {"quotientBound", quotient_bound}},
              common);
  }
  return valid == count ? 0 : 1;
}

int cmd_enumerate(const FieldOptions& fo, const CommonOptions& common, std::int64_t max_n, std::int64_t budget,
                  bool list, std::ostream& out) {
  const Field field = build_field(fo);
  if (max_n < 1) throw PreconditionViolated("--max-n must be at least 1");
  const auto rows = count_table(max_n, field, budget);
  if (common.format == "csv") {
    out << count_table_csv(rows);
    return 0;
  }
  json table = json::array();
  for (const auto& row : rows) {
    table.push_back({{"n", row.n},
                     {"formula", to_string(row.formula)},
                     {"enumerated", to_string(row.enumerated)},
                     {"match", row.formula == row.enumerated}});
  }
  json j = {{"field", to_json(*field)}, {"maxN", max_n}, {"counts", table}};
  if (list) {
    json shells = json::array();
    for (const auto& shell : enumerate_zstar(max_n, field, budget)) {
      json elems = json::array();
      for (const auto& z : shell.elements) elems.push_back(z.to_string());
      shells.push_back({{"n", shell.n}, {"elements", elems}});
    }
    j["shells"] = shells;
  }
  emit_json(out, std::move(j), common);
  return 0;
}

int cmd_measures(const FieldOptions& fo, const CommonOptions& common, const std::string& cyl,
                 const std::string& then, std::int64_t cutoff, const std::string& ball, std::ostream& out) {
  const Field field = build_field(fo);
  json j = {{"field", to_json(*field)}};
  std::vector<std::pair<std::string, std::string>> rows;
  if (!ball.empty()) {
    const auto comma = ball.find(',');
    if (comma == std::string::npos) throw PreconditionViolated("--ball takes s,i");
    Radius radius;
    try {
      radius.s = std::stoll(ball.substr(0, comma));
      radius.i = std::stoll(ball.substr(comma + 1));
    } catch (const std::exception&) {
      throw PreconditionViolated("--ball takes integers s,i");
    }
    const Rational m = ball_measure(radius.s, radius.i, *field);
    j["ball"] = {{"s", radius.s}, {"i", radius.i}, {"measure", to_string(m)}, {"measureValue", m.get_d()}};
    rows.emplace_back("ball_measure", to_string(m));
  }
  if (!cyl.empty()) {
    const auto c = quotient_list(field, cyl, "--cylinder");
    const BallSpec b = cylinder(field, c);
    const Rational m = cylinder_measure(field, c);
    json lits = json::array();
    for (const auto& z : c) lits.push_back(z.to_string());
    j["cylinder"] = {{"quotients", lits},
                     {"center", b.center.to_string()},
                     {"radius", {{"s", b.radius.s}, {"i", b.radius.i}, {"exponent", b.radius.exponent(field->e)}}},
                     {"measure", to_string(m)},
                     {"ballMeasure", to_string(ball_measure(b))},
                     {"measureValue", m.get_d()}};
    rows.emplace_back("cylinder_center", b.center.to_string());
    rows.emplace_back("cylinder_measure", to_string(m));
    if (!then.empty()) {
      const auto d = quotient_list(field, then, "--then");
      const bool holds = product_identity_check(field, c, d);
      const Rational md = cylinder_measure(field, d);
      j["product"] = {{"then", json::array()}, {"measureThen", to_string(md)},
                      {"product", to_string(m * md)}, {"identityHolds", holds}};
      for (const auto& z : d) j["product"]["then"].push_back(z.to_string());
      rows.emplace_back("product_identity", holds ? "true" : "false");
    }
    if (cutoff > 0) {
      const Rational sum = preservation_partial_sum(field, c, cutoff);
      const Rational expected = m * (1 - rational_power(field->p, -field->f * cutoff));
      j["preservation"] = {{"cutoff", cutoff}, {"partialSum", to_string(sum)}, {"expected", to_string(expected)},
                           {"equal", sum == expected}};
      rows.emplace_back("preservation_partial_sum", to_string(sum));
    }
  }
  if (rows.empty()) throw PreconditionViolated("measures needs --cylinder or --ball");
  if (common.format == "csv") {
    out << "key,value\n";
    for (const auto& [k, v] : rows) out << k << ",\"" << v << "\"\n";
  } else {
    emit_json(out, std::move(j), common);
  }
  return 0;
}

int cmd_ergodic(const FieldOptions& fo, const CommonOptions& common, const StatOptions& so,
                const std::string& index, const std::string& window, std::int64_t samples, std::int64_t steps,
                bool progress, std::ostream& out, std::ostream& err) {
  const Field field = build_field(fo);
  EnsembleConfig config(field);
  config.samples = samples;
  config.steps = steps;
  config.seed = common.seed;
  config.threads = common.threads;
  if (progress) {
    config.progress = [&err](std::int64_t done, std::int64_t total) {
      err << "\rtrajectories " << done << '/' << total << (done == total ? "\n" : "") << std::flush;
    };
  }

  if (so.stat == "mixing") {
    if (so.c.empty() || so.d.empty()) throw PreconditionViolated("mixing needs --c and --d");
    const auto c = quotient_list(field, so.c, "--c");
    const auto d = quotient_list(field, so.d, "--d");
    for (const auto& list : {c, d}) {
      for (const auto& z : list) {
        if (std::find(config.targets.begin(), config.targets.end(), z) == config.targets.end()) {
          config.targets.push_back(z);
        }
      }
    }
    cylinder(field, c);
    cylinder(field, d);
    const MixingReport report = mixing_check(run_ensemble(config), c, d);
    if (common.format == "csv") {
      out << "stat,empirical,theoretical,n_obs,std_err,z_score\nmixing," << csv_number(report.empirical) << ','
          << csv_number(report.theoretical.get_d()) << ',' << report.n_obs << ',' << csv_number(report.std_err)
          << ',' << csv_number(report.z_score()) << '\n';
    } else {
      json j = report.to_json();
      j["field"] = to_json(*field);
      j["seed"] = common.seed;
      j["samples"] = samples;
      j["steps"] = steps;
      emit_json(out, std::move(j), common);
    }
    return 0;
  }

  const StatSpec spec = build_stat(field, so);
  if (spec.z) config.targets.push_back(*spec.z);
  theoretical_limit(spec, *field);
  const Ensemble ensemble = run_ensemble(config);
  const StatReport report = window.empty()
                                ? evaluate(ensemble, spec, IndexSequence::parse(index.empty() ? "identity" : index))
                                : evaluate(ensemble, spec, MovingWindow::parse(window));
  if (common.format == "csv") {
    out << to_csv({report});
  } else {
    emit_json(out, report.to_json(), common);
  }
  return 0;
}

int cmd_limits(const FieldOptions& fo, const CommonOptions& common, const StatOptions& so, std::ostream& out) {
  const Field field = build_field(fo);
  if (so.stat == "mixing") {
    if (so.c.empty() || so.d.empty()) throw PreconditionViolated("mixing needs --c and --d");
    const Rational m = cylinder_measure(field, quotient_list(field, so.c, "--c")) *
                       cylinder_measure(field, quotient_list(field, so.d, "--d"));
    if (common.format == "csv") {
      out << "stat,theoretical,exact\nmixing," << csv_number(m.get_d()) << ',' << to_string(m) << '\n';
    } else {
      emit_json(out, {{"field", to_json(*field)}, {"stat", "mixing"}, {"theoretical", m.get_d()},
                      {"theoreticalExact", to_string(m)}},
                common);
    }
    return 0;
  }
  const StatSpec spec = build_stat(field, so);
  const Theory theory = theoretical_limit(spec, *field);
  if (common.format == "csv") {
    std::string params = spec.params().dump();
    std::replace(params.begin(), params.end(), ',', ';');
    out << "stat,params,theoretical,exact\n"
        << spec.id() << ',' << params << ',' << csv_number(theory.value) << ','
        << (theory.exact ? to_string(*theory.exact) : std::string()) << '\n';
    return 0;
  }
  json j = {{"field", to_json(*field)}, {"stat", spec.id()}, {"params", spec.params()}, {"theoretical", theory.value}};
  if (theory.exact) j["theoreticalExact"] = to_string(*theory.exact);
  if (!theory.exact) j["seriesTailBound"] = theory.tail_bound;
  emit_json(out, std::move(j), common);
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"p-adic continued fractions: expansions, finiteness, measures and ergodic averages", "qpcf"};
  app.require_subcommand(1);

  FieldOptions fo;
  CommonOptions common;
  StatOptions so;
  const char* env_seed = std::getenv("QPCF_SEED");
  if (env_seed) {
    try {
      common.seed = std::stoull(env_seed);
    } catch (const std::exception&) {
      err << "error: QPCF_SEED is not an integer\n";
      return 2;
    }
  }
  std::string alpha;
  std::int64_t max_steps = 100;
  std::int64_t precision = 0;
  std::int64_t count = 100;
  std::int64_t bound = 1000;
  std::int64_t finiteness_steps = 10'000;
  std::int64_t max_n = 3;
  std::int64_t budget = kEnumerationBudget;
  bool list = false;
  std::string cyl;
  std::string then;
  std::string ball;
  std::int64_t cutoff = 0;
  std::string index;
  std::string window;
  std::int64_t samples = 200;
  std::int64_t steps = 2000;
  bool progress = false;

  auto* expand_cmd = app.add_subcommand("expand", "continued fraction of an exact literal");
  add_field_options(expand_cmd, fo);
  add_common_options(expand_cmd, common, false);
  expand_cmd->add_option("--alpha", alpha, "element literal")->required();
  expand_cmd->add_option("--max-steps", max_steps)->check(CLI::Range(0, 1'000'000))->capture_default_str();
  expand_cmd->add_option("--precision", precision, "run on p-adic digits modulo p^N instead of exactly")
      ->check(CLI::Range(0, 1'000'000));

  auto* fin_cmd = app.add_subcommand("finiteness", "certified termination for Q(i) / Q(w) with Browkin digits");
  add_field_options(fin_cmd, fo);
  add_common_options(fin_cmd, common, true);
  fin_cmd->add_option("--alpha", alpha, "single literal (otherwise a random batch)");
  fin_cmd->add_option("--count", count)->capture_default_str();
  fin_cmd->add_option("--bound", bound, "numerator/denominator bound")->capture_default_str();
  fin_cmd->add_option("--max-steps", finiteness_steps)->capture_default_str();

  auto* enum_cmd = app.add_subcommand("enumerate", "count Z* shells by brute force");
  add_field_options(enum_cmd, fo);
  add_common_options(enum_cmd, common, false);
  enum_cmd->add_option("--max-n", max_n)->capture_default_str();
  enum_cmd->add_option("--budget", budget)->capture_default_str();
  enum_cmd->add_flag("--list", list, "include the elements");

  auto* meas_cmd = app.add_subcommand("measures", "cylinder and ball measures");
  add_field_options(meas_cmd, fo);
  add_common_options(meas_cmd, common, false);
  meas_cmd->add_option("--cylinder", cyl, "quotients c_1,...,c_n");
  meas_cmd->add_option("--then", then, "quotients d for the product identity");
  meas_cmd->add_option("--cutoff", cutoff, "N for the preservation partial sum");
  meas_cmd->add_option("--ball", ball, "s,i for the ball B(0, p^{s+i/e})");

  auto* erg_cmd = app.add_subcommand("ergodic", "Monte Carlo ergodic averages against their limits");
  add_field_options(erg_cmd, fo);
  add_common_options(erg_cmd, common, true);
  add_stat_options(erg_cmd, so);
  auto* index_opt = erg_cmd->add_option("--index", index, "identity, squares, primes or custom:1,4,9");
  erg_cmd->add_option("--window", window, "n,n  0,n  2n,n  or custom:a:b;a:b")->excludes(index_opt);
  erg_cmd->add_option("--samples", samples)->check(CLI::Range(std::int64_t{1}, std::int64_t{1'000'000}))->capture_default_str();
  erg_cmd->add_option("--steps", steps)->check(CLI::Range(std::int64_t{1}, std::int64_t{10'000'000}))->capture_default_str();
  erg_cmd->add_flag("--progress", progress, "progress on stderr");

  auto* lim_cmd = app.add_subcommand("limits", "theoretical limits only");
  add_field_options(lim_cmd, fo);
  add_common_options(lim_cmd, common, false);
  add_stat_options(lim_cmd, so);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*expand_cmd) return cmd_expand(fo, common, alpha, max_steps, precision, out);
    if (*fin_cmd) return cmd_finiteness(fo, common, alpha, count, bound, finiteness_steps, out);
    if (*enum_cmd) return cmd_enumerate(fo, common, max_n, budget, list, out);
    if (*meas_cmd) return cmd_measures(fo, common, cyl, then, cutoff, ball, out);
    if (*erg_cmd) return cmd_ergodic(fo, common, so, index, window, samples, steps, progress, out, err);
    if (*lim_cmd) return cmd_limits(fo, common, so, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return static_cast<int>(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"qpcf"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace qpcf::cli
