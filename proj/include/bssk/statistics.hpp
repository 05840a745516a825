#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace bssk {

struct TrialRecord {
  std::int64_t trial = 0;
  std::uint64_t seed = 0;
  double statistic = 0.0;
  double mu1 = 0.0;
  bool failed = false;
};

struct ExperimentSummary {
  std::vector<double> samples;
  double mean = 0.0;
  double variance = 0.0;  ///< unbiased
  double skewness = 0.0;
  double excess_kurtosis = 0.0;
  std::optional<double> ks_distance;
  int failures = 0;
  std::vector<TrialRecord> records;  ///< one per trial, failed ones included
};

/// One-pass central moments; KS distance against N(reference_mean, reference_var)
/// when both are given.
ExperimentSummary summarize(const std::vector<double>& samples, std::optional<double> reference_mean = {},
                            std::optional<double> reference_var = {});

double normal_cdf(double x, double mean = 0.0, double var = 1.0);

double ks_normal(std::vector<double> samples, double mean, double var);

double ks_two_sample(std::vector<double> a, std::vector<double> b);

}  // namespace bssk
