#pragma once

// Seeded Monte Carlo campaigns over disorder realizations.

#include <cstdint>
#include <string_view>
#include <vector>

#include "bssk/disorder.hpp"
#include "bssk/spectra.hpp"
#include "bssk/statistics.hpp"

namespace bssk {

enum class ExperimentMode { high_fluct, low_fluct, edge, rigidity };

std::string_view to_string(ExperimentMode mode);
ExperimentMode parse_mode(std::string_view name);

struct ExperimentConfig {
  Eigen::Index n1 = 200;
  Eigen::Index n2 = 200;
  double beta = 1.0;
  DisorderSpec spec = make_distribution(DistributionKind::gaussian);
  std::int64_t trials = 100;
  std::uint64_t master_seed = 1;
  ExperimentMode mode = ExperimentMode::high_fluct;
  unsigned workers = 0;   ///< 0: hardware concurrency; never changes results
  double epsilon = 0.3;   ///< rigidity exponent
};

/// Throws ConfigError when trials < 1, a dimension is zero, beta <= 0, or the
/// mode does not match the regime of (beta, N1/N, N2/N).
void validate(const ExperimentConfig& config);

/// Per-trial seed derived from the master seed and the trial index.
std::uint64_t trial_seed(std::uint64_t master_seed, std::int64_t trial);

/// Gram spectrum of the disorder drawn for one trial.
Spectrum trial_spectrum(const ExperimentConfig& config, std::int64_t trial);

/// N (F_N - F) in high mode, N^{2/3} (F_N - F) / A in low mode, with F_N from the spectrum.
ExperimentSummary run_fluctuation_experiment(const ExperimentConfig& config);

/// N1/(sqrt N1 + sqrt N2) (1/sqrt N1 + 1/sqrt N2)^{-1/3} (mu_1 - d_+).
ExperimentSummary run_edge_experiment(const ExperimentConfig& config);

/// Rescaled edge factor used by run_edge_experiment.
double edge_scale(Eigen::Index n1, Eigen::Index n2);

/// n^{2/3}(lambda_1 - 2) for GOE matrices with N(0, 1 + delta_ij)/sqrt n entries.
ExperimentSummary goe_oracle(Eigen::Index n, std::int64_t trials, std::uint64_t seed, unsigned workers = 0);

struct RigiditySummary {
  std::vector<RigidityReport> reports;
  ExperimentSummary summary;  ///< statistic = max ratio per trial
  int total_violations = 0;
};

RigiditySummary run_rigidity_experiment(const ExperimentConfig& config);

}  // namespace bssk
