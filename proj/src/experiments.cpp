#include "bssk/experiments.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <string>

#include "bssk/errors.hpp"
#include "bssk/parallel.hpp"
#include "bssk/partition.hpp"
#include "bssk/random.hpp"
#include "bssk/theory.hpp"

namespace bssk {

namespace {

struct Ratios {
  double r1, r2;
};

Ratios finite_ratios(Eigen::Index n1, Eigen::Index n2) {
  const double n = static_cast<double>(n1 + n2);
  return {static_cast<double>(n1) / n, static_cast<double>(n2) / n};
}

// Runs `statistic(spectrum, trial)` on every trial, counting RareEventError as a failure.
template <typename Statistic>
std::vector<TrialRecord> run_trials(const ExperimentConfig& config, Statistic&& statistic) {
  std::vector<TrialRecord> records(static_cast<std::size_t>(config.trials));
  parallel_for(records.size(), config.workers, [&](std::size_t t) {
    TrialRecord& r = records[t];
    r.trial = static_cast<std::int64_t>(t);
    r.seed = trial_seed(config.master_seed, r.trial);
    const Spectrum spectrum = trial_spectrum(config, r.trial);
    r.mu1 = spectrum.top();
    try {
      r.statistic = statistic(spectrum, t);
    } catch (const RareEventError&) {
      r.failed = true;
      r.statistic = std::nan("");
    }
  });
  return records;
}

ExperimentSummary collect(std::vector<TrialRecord> records, std::optional<double> mean = {},
                          std::optional<double> var = {}) {
  std::vector<double> samples;
  int failures = 0;
  for (const auto& r : records) {
    if (r.failed)
      ++failures;
    else
      samples.push_back(r.statistic);
  }
  if (samples.empty()) throw RareEventError("experiment: every trial failed");
  ExperimentSummary s = summarize(samples, mean, var);
  s.failures = failures;
  s.records = std::move(records);
  return s;
}

}  // namespace

std::string_view to_string(ExperimentMode mode) {
  switch (mode) {
    case ExperimentMode::high_fluct: return "high_fluct";
    case ExperimentMode::low_fluct: return "low_fluct";
    case ExperimentMode::edge: return "edge";
    case ExperimentMode::rigidity: return "rigidity";
  }
  return "unknown";
}

ExperimentMode parse_mode(std::string_view name) {
  for (auto m : {ExperimentMode::high_fluct, ExperimentMode::low_fluct, ExperimentMode::edge, ExperimentMode::rigidity})
    if (name == to_string(m)) return m;
  throw ConfigError("mode: unknown value '" + std::string(name) + "'");
}

void validate(const ExperimentConfig& config) {
  if (config.trials < 1) throw ConfigError("trials: must be at least 1");
  if (config.n1 < 1) throw ConfigError("n1: must be at least 1");
  if (config.n2 < 1) throw ConfigError("n2: must be at least 1");
  if (!(config.beta > 0.0)) throw ConfigError("beta: must be positive");
  if (!(config.epsilon > 0.0)) throw ConfigError("epsilon: must be positive");
  const Ratios r = finite_ratios(config.n1, config.n2);
  const Regime regime = classify(config.beta, r.r1, r.r2);
  if (config.mode == ExperimentMode::high_fluct && regime != Regime::high)
    throw ConfigError("beta: high_fluct requires beta below beta_c");
  if (config.mode == ExperimentMode::low_fluct && regime != Regime::low)
    throw ConfigError("beta: low_fluct requires beta above beta_c");
  if (config.mode == ExperimentMode::edge && regime != Regime::low)
    throw ConfigError("beta: edge requires beta above beta_c");
}

std::uint64_t trial_seed(std::uint64_t master_seed, std::int64_t trial) {
  return derive_seed(master_seed, static_cast<std::uint64_t>(trial));
}

Spectrum trial_spectrum(const ExperimentConfig& config, std::int64_t trial) {
  return gram_eigenvalues(sample_disorder(config.spec, config.n1, config.n2, trial_seed(config.master_seed, trial)));
}

ExperimentSummary run_fluctuation_experiment(const ExperimentConfig& config) {
  if (config.mode != ExperimentMode::high_fluct && config.mode != ExperimentMode::low_fluct)
    throw ConfigError("mode: fluctuation experiment needs high_fluct or low_fluct");
  validate(config);
  const Ratios r = finite_ratios(config.n1, config.n2);
  const RegimeConstants rc = regime_constants(config.beta, r.r1, r.r2, config.spec.w4);
  const double n = static_cast<double>(config.n1 + config.n2);
  if (config.mode == ExperimentMode::high_fluct) {
    auto records = run_trials(config, [&](const Spectrum& s, std::size_t) {
      return n * (finite_n_prediction(s, config.beta, r.r1, r.r2) - rc.f_limit);
    });
    return collect(std::move(records), rc.mu, rc.sigma2);
  }
  const double scale = std::pow(n, 2.0 / 3.0) / *rc.a_scale;
  auto records = run_trials(config, [&](const Spectrum& s, std::size_t) {
    return scale * (finite_n_prediction(s, config.beta, r.r1, r.r2) - rc.f_limit);
  });
  return collect(std::move(records));
}

double edge_scale(Eigen::Index n1, Eigen::Index n2) {
  const double a = std::sqrt(static_cast<double>(n1)), b = std::sqrt(static_cast<double>(n2));
  return static_cast<double>(n1) / (a + b) * std::pow(1.0 / a + 1.0 / b, -1.0 / 3.0);
}

ExperimentSummary run_edge_experiment(const ExperimentConfig& config) {
  if (config.mode != ExperimentMode::edge) throw ConfigError("mode: edge experiment needs mode edge");
  validate(config);
  const Ratios r = finite_ratios(config.n1, config.n2);
  const MPLaw law = mp_law(r.r1, r.r2);
  auto records = run_trials(config, [&](const Spectrum& s, std::size_t) {
    return edge_scale(s.n1, s.n2) * (s.top() - law.d_plus);
  });
  return collect(std::move(records));
}

ExperimentSummary goe_oracle(Eigen::Index n, std::int64_t trials, std::uint64_t seed, unsigned workers) {
  if (n < 50) throw ParameterError("goe_oracle: n must be at least 50");
  if (trials < 1) throw ConfigError("trials: must be at least 1");
  std::vector<TrialRecord> records(static_cast<std::size_t>(trials));
  const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));
  parallel_for(records.size(), workers, [&](std::size_t t) {
    TrialRecord& r = records[t];
    r.trial = static_cast<std::int64_t>(t);
    r.seed = trial_seed(seed, r.trial);
    const CounterStream stream(r.seed);
    Eigen::MatrixXd h(n, n);
    std::uint64_t k = 0;
    for (Eigen::Index j = 0; j < n; ++j) {
      for (Eigen::Index i = j; i < n; ++i) {
        const double sd = i == j ? std::sqrt(2.0) : 1.0;
        h(i, j) = sd * stream.normal(k++) * inv_sqrt_n;
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw SolverError("goe_oracle: eigensolver did not converge");
    r.mu1 = solver.eigenvalues()[n - 1];
    r.statistic = std::pow(static_cast<double>(n), 2.0 / 3.0) * (r.mu1 - 2.0);
  });
  return collect(std::move(records));
}

RigiditySummary run_rigidity_experiment(const ExperimentConfig& config) {
  if (config.mode != ExperimentMode::rigidity) throw ConfigError("mode: rigidity experiment needs mode rigidity");
  validate(config);
  const Ratios r = finite_ratios(config.n1, config.n2);
  const MPLaw law = mp_law(r.r1, r.r2);
  const ClassicalLocations locations = classical_locations(law, std::min(config.n1, config.n2));
  RigiditySummary out;
  out.reports.resize(static_cast<std::size_t>(config.trials));
  auto records = run_trials(config, [&](const Spectrum& s, std::size_t t) {
    out.reports[t] = rigidity_report(s, locations, config.epsilon);
    return out.reports[t].max_ratio;
  });
  for (const auto& report : out.reports) out.total_violations += report.violations;
  out.summary = collect(std::move(records));
  return out;
}

}  // namespace bssk
