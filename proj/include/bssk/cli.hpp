#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "bssk/experiments.hpp"

namespace bssk::cli {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kSamplesColumns = "trial,seed,statistic,mu1";
inline constexpr int kCsvVersion = 1;

/// Flat JSON object with any of: n1, n2, beta, trials, seed, dist, mode, workers,
/// epsilon, samples. Unknown keys, malformed JSON and out-of-range values throw
/// ConfigError naming the field.
ExperimentConfig load_config(const std::string& path, std::int64_t* samples = nullptr);

/// Exit codes: 0 success, 1 numerical or acceptance failure, 2 usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args);

}  // namespace bssk::cli
