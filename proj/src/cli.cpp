#include "bssk/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "bssk/errors.hpp"
#include "bssk/partition.hpp"
#include "bssk/random.hpp"
#include "bssk/saddle.hpp"
#include "bssk/theory.hpp"

namespace bssk::cli {

namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

std::string g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string timestamp(std::chrono::system_clock::time_point t) {
  const std::time_t tt = std::chrono::system_clock::to_time_t(t);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

struct Flags {
  double beta = 1.0;
  double r1 = 0.5;
  double w4 = 3.0;
  std::int64_t n1 = 200;
  std::int64_t n2 = 200;
  std::int64_t trials = 100;
  std::uint64_t seed = 1;
  std::string dist = "gaussian";
  bool w4_check = false;
  std::string out_dir;
  std::string config;
  std::int64_t samples = 1000000;
  double epsilon = 0.3;
  unsigned workers = 0;
};

struct Command {
  std::string name;
  CLI::App* app = nullptr;
  Flags flags;
};

// Thrown for command-level acceptance failures (exit 1) that are not numerical errors.
struct AcceptanceFailure : Error {
  using Error::Error;
};

struct RunContext {
  std::string command;
  fs::path out_dir;
  json config = json::object();
  std::vector<std::string> outputs;

  void write(const std::string& name, const std::string& content) {
    fs::create_directories(out_dir);
    const fs::path path = out_dir / name;
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot write " + path.string());
    f << content;
    outputs.push_back(path.string());
  }
};

json config_json(const ExperimentConfig& c, std::optional<std::int64_t> samples = {}) {
  json j = {{"n1", c.n1},       {"n2", c.n2},           {"beta", c.beta},
            {"trials", c.trials}, {"seed", c.master_seed}, {"dist", std::string(to_string(c.spec.kind))},
            {"mode", std::string(to_string(c.mode))}, {"workers", c.workers}, {"epsilon", c.epsilon}};
  if (samples) j["samples"] = *samples;
  return j;
}

std::int64_t integer_field(const json& j, const std::string& key, std::int64_t lo) {
  if (!j.is_number_integer()) throw ConfigError(key + ": must be an integer");
  const auto v = j.get<std::int64_t>();
  if (v < lo) throw ConfigError(key + ": must be at least " + std::to_string(lo));
  return v;
}

double positive_field(const json& j, const std::string& key) {
  if (!j.is_number()) throw ConfigError(key + ": must be a number");
  const double v = j.get<double>();
  if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(key + ": must be positive");
  return v;
}

json read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config: expected a JSON object");
  return j;
}

void apply_config(const json& j, ExperimentConfig& c, std::int64_t* samples) {
  for (const auto& [key, value] : j.items()) {
    if (key == "n1") c.n1 = integer_field(value, key, 1);
    else if (key == "n2") c.n2 = integer_field(value, key, 1);
    else if (key == "trials") c.trials = integer_field(value, key, 1);
    else if (key == "seed") {
      if (!value.is_number_unsigned()) throw ConfigError("seed: must be a non-negative integer");
      c.master_seed = value.get<std::uint64_t>();
    } else if (key == "beta") c.beta = positive_field(value, key);
    else if (key == "epsilon") c.epsilon = positive_field(value, key);
    else if (key == "workers") c.workers = static_cast<unsigned>(integer_field(value, key, 0));
    else if (key == "samples") {
      const auto v = integer_field(value, key, 1);
      if (samples) *samples = v;
    } else if (key == "dist" || key == "mode") {
      if (!value.is_string()) throw ConfigError(key + ": must be a string");
      const auto text = value.get<std::string>();
      if (key == "mode") {
        c.mode = parse_mode(text);
      } else {
        try {
          c.spec = make_distribution(parse_distribution(text));
        } catch (const ParameterError&) {
          throw ConfigError("dist: unknown distribution '" + text + "'");
        }
      }
    } else if (key == "w4_check") {
      if (!value.is_boolean()) throw ConfigError("w4_check: must be true or false");
    } else {
      throw ConfigError(key + ": unknown field");
    }
  }
}

ExperimentConfig config_from_flags(const Command& cmd, ExperimentMode mode, std::int64_t* samples) {
  const Flags& f = cmd.flags;
  auto given = [&](const char* name) {
    const CLI::Option* opt = cmd.app->get_option_no_throw(name);
    return opt && opt->count() > 0;
  };
  const bool file = !f.config.empty();
  ExperimentConfig c;
  std::int64_t sample_count = f.samples;
  auto apply_flags = [&](bool only_given) {
    auto use = [&](const char* name) { return !only_given || given(name); };
    if (use("--n1")) c.n1 = f.n1;
    if (use("--n2")) c.n2 = f.n2;
    if (use("--beta")) c.beta = f.beta;
    if (use("--trials")) c.trials = f.trials;
    if (use("--seed")) c.master_seed = f.seed;
    if (use("--workers")) c.workers = f.workers;
    if (use("--epsilon")) c.epsilon = f.epsilon;
    if (use("--samples")) sample_count = f.samples;
    if (use("--dist")) {
      try {
        c.spec = make_distribution(parse_distribution(f.dist));
      } catch (const ParameterError&) {
        throw ConfigError("dist: unknown distribution '" + f.dist + "'");
      }
    }
  };
  apply_flags(false);
  if (file) {
    apply_config(read_config(f.config), c, &sample_count);
    apply_flags(true);
  }
  c.mode = mode;
  if (c.n1 < 1) throw ConfigError("n1: must be at least 1");
  if (c.n2 < 1) throw ConfigError("n2: must be at least 1");
  if (c.trials < 1) throw ConfigError("trials: must be at least 1");
  if (!(c.beta > 0.0)) throw ConfigError("beta: must be positive");
  if (!(c.epsilon > 0.0)) throw ConfigError("epsilon: must be positive");
  if (sample_count < 1) throw ConfigError("samples: must be at least 1");
  if (samples) *samples = sample_count;
  return c;
}

std::string samples_csv(const ExperimentSummary& s) {
  std::ostringstream out;
  out << kSamplesColumns << '\n';
  for (const auto& r : s.records) {
    out << r.trial << ',' << r.seed << ',' << (r.failed ? std::string("nan") : g17(r.statistic)) << ',' << g17(r.mu1)
        << '\n';
  }
  return out.str();
}

json summary_json(const ExperimentSummary& s) {
  return {{"count", s.samples.size()},     {"mean", s.mean},
          {"variance", s.variance},        {"skewness", s.skewness},
          {"excess_kurtosis", s.excess_kurtosis}, {"ks_distance", optional_json(s.ks_distance)},
          {"failures", s.failures}};
}

json theory_json(double beta, double r1, double w4) {
  if (!(beta > 0.0)) throw ConfigError("beta: must be positive");
  if (!(r1 > 0.0 && r1 < 1.0)) throw ConfigError("r1: must lie in (0, 1)");
  const double r2 = 1.0 - r1;
  const RegimeConstants rc = regime_constants(beta, r1, r2, w4);
  json j = {{"beta", rc.beta},       {"r1", rc.r1},
            {"r2", rc.r2},           {"w4", rc.w4},
            {"beta_c", rc.beta_c},   {"regime", std::string(to_string(rc.regime))},
            {"s_param", rc.s_param}, {"f", rc.f_limit},
            {"f_limit", rc.f_limit}, {"z_c", optional_json(rc.z_c)},
            {"mu", optional_json(rc.mu)}, {"sigma2", optional_json(rc.sigma2)},
            {"a_scale", optional_json(rc.a_scale)}};
  if (rc.regime != Regime::critical) {
    const auto ac = auffinger_chen_value(beta, rc.r1, rc.r2);
    j["auffinger_chen"] = {{"value", ac.value}, {"a", ac.a}, {"b", ac.b}};
  }
  if (rc.regime == Regime::high) {
    const CltConstants c = clt_log_constants(beta, rc.r1, rc.r2, w4);
    j["clt"] = {{"big_m", c.big_m}, {"big_v", c.big_v}, {"m_goe", c.m_goe}, {"v_goe", c.v_goe},
                {"tau0", c.tau0},   {"tau1", c.tau1},   {"tau2", c.tau2}};
  }
  return j;
}

json do_theory(Command& cmd, RunContext& ctx) {
  const Flags& f = cmd.flags;
  ctx.config = {{"beta", f.beta}, {"r1", f.r1}, {"w4", f.w4}};
  return theory_json(f.beta, f.r1, f.w4);
}

json do_spectrum(Command& cmd, RunContext& ctx) {
  const ExperimentConfig c = config_from_flags(cmd, ExperimentMode::rigidity, nullptr);
  ctx.config = config_json(c);
  const DisorderMatrix j = sample_disorder(c.spec, c.n1, c.n2, c.master_seed);
  const Spectrum s = gram_eigenvalues(j);
  const double n = static_cast<double>(s.n1 + s.n2);
  const MPLaw law = mp_law(static_cast<double>(s.n1) / n, static_cast<double>(s.n2) / n);
  const ClassicalLocations g = classical_locations(law, s.values.size());
  const RigidityReport report = rigidity_report(s, g, c.epsilon);
  std::ostringstream csv;
  csv << "k,mu,classical\n";
  for (Eigen::Index k = 0; k < s.values.size(); ++k) csv << k + 1 << ',' << g17(s.values[k]) << ',' << g17(g.g[k]) << '\n';
  ctx.write("spectrum.csv", csv.str());
  return {{"n1", s.n1},
          {"n2", s.n2},
          {"mu1", s.top()},
          {"d_plus", law.d_plus},
          {"d_minus", law.d_minus},
          {"rigidity", {{"epsilon", c.epsilon}, {"max_ratio", report.max_ratio}, {"violations", report.violations},
                        {"worst_index", report.worst_index}}}};
}

json do_saddle(Command& cmd, RunContext& ctx) {
  const ExperimentConfig c = config_from_flags(cmd, ExperimentMode::edge, nullptr);
  ctx.config = config_json(c);
  const Spectrum s = gram_eigenvalues(sample_disorder(c.spec, c.n1, c.n2, c.master_seed));
  const SaddleInput in = saddle_input(s, c.beta);
  const double n = static_cast<double>(s.n1 + s.n2);
  const MPLaw law = mp_law(static_cast<double>(s.n1) / n, static_cast<double>(s.n2) / n);
  const SaddlePoint p = solve_gamma(in);
  const double bc = b_critical(in.alpha_n, law);
  const auto g = g_eval<double>(in, p.gamma1, p.gamma2);
  json out = {{"n", in.n},
              {"alpha_n", in.alpha_n},
              {"b_n", in.b_n},
              {"b_c", bc},
              {"regime", std::string(to_string(classify(c.beta, law.r1, law.r2)))},
              {"mu1", s.top()},
              {"d_plus", law.d_plus},
              {"gamma", p.gamma},
              {"gamma1", p.gamma1},
              {"gamma2", p.gamma2},
              {"residual", p.residual},
              {"gradient", {std::abs(g.d1), std::abs(g.d2)}},
              {"discriminant", saddle_discriminant(in, p)},
              {"gap", p.gamma - s.top()}};
  const Regime regime = in.b_n < bc ? Regime::high : Regime::low;
  if (regime == Regime::high) {
    const AsymptoticQ q = q_high_asymptotic(in, law);
    out["z_c"] = *q.z_c;
    out["a_hat"] = *q.a_hat;
    out["d_hat"] = *q.d_hat;
    out["log_q_over_n"] = q.log_q_over_n;
    out["log_q_saddle"] = q_saddle_value(in);
  } else {
    const AsymptoticQ q = q_low_asymptotic(in, law);
    out["e_hat"] = *q.e_hat;
    out["l_hat"] = *q.l_hat;
    out["log_q_over_n"] = q.log_q_over_n;
    out["gamma_bound_ok"] = low_gamma_bounds_check(in, law, p, c.epsilon);
  }
  return out;
}

json do_verify_q(Command& cmd, RunContext& ctx) {
  std::int64_t samples = 0;
  const ExperimentConfig c = config_from_flags(cmd, ExperimentMode::edge, &samples);
  ctx.config = config_json(c, samples);
  const DisorderMatrix j = sample_disorder(c.spec, c.n1, c.n2, c.master_seed);
  const Spectrum s = gram_eigenvalues(j);
  const ContourResult q = contour_q_detail(saddle_input(s, c.beta));
  const double log_z = q.log_value + log_prefactor(s.n1, s.n2, c.beta);
  const PartitionEstimate mc = sphere_mc_partition(j, c.beta, samples, derive_seed(c.master_seed, 0x5eed), c.workers);
  const double contour_z = std::exp(log_z);
  const double se = *mc.std_error;
  const double sigmas = se > 0.0 ? std::abs(mc.value - contour_z) / se : 0.0;
  json out = {{"mc", mc.value},
              {"mc_se", se},
              {"contour", contour_z},
              {"log_q", q.log_value},
              {"z_ratio", mc.value / contour_z},
              {"sigmas", sigmas},
              {"imag_ratio", q.imag_ratio},
              {"truncation", q.truncation},
              {"nodes_per_line", q.nodes_per_line},
              {"agree", sigmas <= 3.0}};
  if (!(sigmas <= 3.0)) {
    ctx.write("summary.json", out.dump(2) + "\n");
    throw AcceptanceFailure("verify-q: Monte Carlo and contour disagree by " + g17(sigmas) + " standard errors");
  }
  return out;
}

json do_fluctuate(Command& cmd, RunContext& ctx) {
  ExperimentConfig c = config_from_flags(cmd, ExperimentMode::high_fluct, nullptr);
  const double n = static_cast<double>(c.n1 + c.n2);
  const double r1 = static_cast<double>(c.n1) / n, r2 = static_cast<double>(c.n2) / n;
  const Regime regime = classify(c.beta, r1, r2);
  if (regime == Regime::critical) throw ConfigError("beta: critical value, no fluctuation law");
  c.mode = regime == Regime::high ? ExperimentMode::high_fluct : ExperimentMode::low_fluct;
  bool w4_check = cmd.flags.w4_check;
  if (!w4_check && !cmd.flags.config.empty()) {
    const json file = read_config(cmd.flags.config);
    w4_check = file.value("w4_check", false);
  }
  ctx.config = config_json(c);
  ctx.config["w4_check"] = w4_check;
  if (w4_check && c.mode != ExperimentMode::high_fluct)
    throw ConfigError("w4-check: only meaningful in the high-temperature regime");

  const ExperimentSummary s = run_fluctuation_experiment(c);
  ctx.write("samples.csv", samples_csv(s));
  json out = summary_json(s);
  out["mode"] = std::string(to_string(c.mode));
  const RegimeConstants rc = regime_constants(c.beta, r1, r2, c.spec.w4);
  out["theory"] = {{"mu", optional_json(rc.mu)}, {"sigma2", optional_json(rc.sigma2)}};
  if (w4_check) {
    ExperimentConfig twin = c;
    twin.spec = make_distribution(c.spec.kind == DistributionKind::rademacher ? DistributionKind::gaussian
                                                                               : DistributionKind::rademacher);
    const ExperimentSummary t = run_fluctuation_experiment(twin);
    const double q = rc.r1 * rc.r2 * std::pow(c.beta, 4);
    const double predicted = -(twin.spec.w4 - c.spec.w4) * q / 4.0;
    const double observed = t.mean - s.mean;
    const bool ordered = (predicted > 0.0) == (observed > 0.0);
    out["w4_check"] = {{"twin_dist", std::string(to_string(twin.spec.kind))},
                       {"twin_mean", t.mean},
                       {"twin_variance", t.variance},
                       {"predicted_shift", predicted},
                       {"observed_shift", observed},
                       {"ordered", ordered}};
    if (!ordered) {
      ctx.write("summary.json", out.dump(2) + "\n");
      throw AcceptanceFailure("w4-check: mean shift has the wrong sign");
    }
  }
  return out;
}

json do_edge(Command& cmd, RunContext& ctx) {
  const ExperimentConfig c = config_from_flags(cmd, ExperimentMode::edge, nullptr);
  ctx.config = config_json(c);
  const ExperimentSummary s = run_edge_experiment(c);
  ctx.write("samples.csv", samples_csv(s));
  json out = summary_json(s);
  out["scale"] = edge_scale(std::max(c.n1, c.n2), std::min(c.n1, c.n2));
  return out;
}

json do_rigidity(Command& cmd, RunContext& ctx) {
  const ExperimentConfig c = config_from_flags(cmd, ExperimentMode::rigidity, nullptr);
  ctx.config = config_json(c);
  const RigiditySummary r = run_rigidity_experiment(c);
  ctx.write("samples.csv", samples_csv(r.summary));
  json out = summary_json(r.summary);
  out["epsilon"] = c.epsilon;
  out["total_violations"] = r.total_violations;
  out["max_ratio"] = *std::max_element(r.summary.samples.begin(), r.summary.samples.end());
  if (r.total_violations > 0) {
    ctx.write("summary.json", out.dump(2) + "\n");
    throw AcceptanceFailure("rigidity: " + std::to_string(r.total_violations) + " violations");
  }
  return out;
}

void add_common(Command& cmd, bool experiment) {
  Flags& f = cmd.flags;
  CLI::App* app = cmd.app;
  app->add_option("--n1", f.n1, "first dimension N1")->capture_default_str();
  app->add_option("--n2", f.n2, "second dimension N2")->capture_default_str();
  app->add_option("--beta", f.beta, "inverse temperature")->capture_default_str();
  app->add_option("--seed", f.seed, "master seed")->capture_default_str();
  app->add_option("--dist", f.dist, "disorder law: gaussian, rademacher or uniform")->capture_default_str();
  app->add_option("--workers", f.workers, "worker threads, 0 = all cores")->capture_default_str();
  app->add_option("--epsilon", f.epsilon, "rigidity exponent")->capture_default_str();
  app->add_option("--config", f.config, "flat JSON config; flags override it");
  if (experiment) app->add_option("--trials", f.trials, "number of disorder samples")->capture_default_str();
}

}  // namespace

ExperimentConfig load_config(const std::string& path, std::int64_t* samples) {
  ExperimentConfig c;
  apply_config(read_config(path), c, samples);
  return c;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"numerical lab for the bipartite spherical SK model", "bssk"};
  app.require_subcommand(1);
  std::vector<std::unique_ptr<Command>> commands;
  auto make = [&](const std::string& name, const std::string& help) -> Command& {
    auto cmd = std::make_unique<Command>();
    cmd->name = name;
    cmd->app = app.add_subcommand(name, help);
    cmd->app->add_option("--out-dir", cmd->flags.out_dir, "output directory (default bssk-runs/<command>)");
    commands.push_back(std::move(cmd));
    return *commands.back();
  };

  Command& theory = make("theory", "closed-form regime constants as JSON");
  theory.app->add_option("--beta", theory.flags.beta, "inverse temperature")->required();
  theory.app->add_option("--r1", theory.flags.r1, "ratio N1/N")->capture_default_str();
  theory.app->add_option("--w4", theory.flags.w4, "fourth moment of the disorder")->capture_default_str();

  Command& spectrum = make("spectrum", "one Gram spectrum with classical locations and rigidity");
  spectrum.flags.n1 = spectrum.flags.n2 = 1000;
  add_common(spectrum, false);

  Command& saddle = make("saddle", "saddle point and asymptotic Q_n for one disorder sample");
  saddle.flags.n1 = saddle.flags.n2 = 500;
  add_common(saddle, false);

  Command& verify = make("verify-q", "contour quadrature vs sphere Monte Carlo on a tiny instance");
  verify.flags.n1 = 3;
  verify.flags.n2 = 2;
  verify.flags.beta = 0.5;
  verify.flags.seed = 42;
  add_common(verify, false);
  verify.app->add_option("--samples", verify.flags.samples, "Monte Carlo samples")->capture_default_str();

  Command& fluctuate = make("fluctuate", "free-energy fluctuation experiment (regime picked from beta)");
  fluctuate.flags.trials = 2000;
  fluctuate.flags.seed = 11;
  add_common(fluctuate, true);
  fluctuate.app->add_flag("--w4-check", fluctuate.flags.w4_check,
                          "also run the twin law with the other fourth moment and check the mean shift sign");

  Command& edge = make("edge", "rescaled top-eigenvalue experiment");
  edge.flags.n1 = edge.flags.n2 = 500;
  edge.flags.beta = 2.0;
  edge.flags.trials = 1000;
  edge.flags.seed = 5;
  add_common(edge, true);

  Command& rigidity = make("rigidity", "rigidity of the spectrum around classical locations");
  rigidity.flags.n1 = rigidity.flags.n2 = 1000;
  rigidity.flags.trials = 20;
  add_common(rigidity, true);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return e.get_exit_code() == 0 ? 0 : 2;
  }

  Command* cmd = nullptr;
  for (auto& c : commands)
    if (c->app->parsed()) cmd = c.get();

  RunContext ctx;
  ctx.command = cmd->name;
  ctx.out_dir = cmd->flags.out_dir.empty() ? fs::path("bssk-runs") / cmd->name : fs::path(cmd->flags.out_dir);
  const auto started = std::chrono::system_clock::now();
  const auto clock0 = std::chrono::steady_clock::now();
  int code = 0;
  std::string error;
  json result;
  try {
    if (cmd->name == "theory") result = do_theory(*cmd, ctx);
    else if (cmd->name == "spectrum") result = do_spectrum(*cmd, ctx);
    else if (cmd->name == "saddle") result = do_saddle(*cmd, ctx);
    else if (cmd->name == "verify-q") result = do_verify_q(*cmd, ctx);
    else if (cmd->name == "fluctuate") result = do_fluctuate(*cmd, ctx);
    else if (cmd->name == "edge") result = do_edge(*cmd, ctx);
    else result = do_rigidity(*cmd, ctx);
    ctx.write("summary.json", result.dump(2) + "\n");
    out << result.dump(2) << '\n';
  } catch (const ConfigError& e) {
    code = 2;
    error = e.what();
  } catch (const ParameterError& e) {
    code = 2;
    error = e.what();
  } catch (const DimensionError& e) {
    code = 2;
    error = e.what();
  } catch (const std::exception& e) {
    code = 1;
    error = e.what();
  }
  if (code != 0) err << "error: " << error << '\n';

  json manifest = {{"command", ctx.command},
                   {"config", ctx.config},
                   {"master_seed", ctx.config.contains("seed") ? ctx.config["seed"] : json(nullptr)},
                   {"tool_version", kToolVersion},
                   {"started_at", timestamp(started)},
                   {"finished_at", timestamp(std::chrono::system_clock::now())},
                   {"wall_time_s", std::chrono::duration<double>(std::chrono::steady_clock::now() - clock0).count()},
                   {"csv", {{"samples_columns", kSamplesColumns}, {"version", kCsvVersion}}},
                   {"status", code == 0 ? "ok" : "failed"},
                   {"exit_code", code}};
  if (!error.empty()) manifest["error"] = error;
  manifest["outputs"] = ctx.outputs;
  try {
    fs::create_directories(ctx.out_dir);
    std::ofstream f(ctx.out_dir / "manifest.json");
    f << manifest.dump(2) << '\n';
  } catch (const std::exception& e) {
    err << "error: cannot write manifest: " << e.what() << '\n';
    if (code == 0) code = 1;
  }
  return code;
}

int run(const std::vector<std::string>& args) { return run(args, std::cout, std::cerr); }

}  // namespace bssk::cli
