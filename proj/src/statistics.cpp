#include "bssk/statistics.hpp"

#include <algorithm>
#include <cmath>

#include "bssk/errors.hpp"

namespace bssk {

ExperimentSummary summarize(const std::vector<double>& samples, std::optional<double> reference_mean,
                            std::optional<double> reference_var) {
  if (samples.empty()) throw ParameterError("summarize: no samples");
  double n = 0.0, mean = 0.0, m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (const double x : samples) {
    const double n0 = n;
    n += 1.0;
    const double delta = x - mean;
    const double dn = delta / n;
    const double dn2 = dn * dn;
    const double term = delta * dn * n0;
    mean += dn;
    m4 += term * dn2 * (n * n - 3.0 * n + 3.0) + 6.0 * dn2 * m2 - 4.0 * dn * m3;
    m3 += term * dn * (n - 2.0) - 3.0 * dn * m2;
    m2 += term;
  }
  ExperimentSummary s;
  s.samples = samples;
  s.mean = mean;
  s.variance = n > 1.0 ? m2 / (n - 1.0) : 0.0;
  if (m2 > 0.0) {
    s.skewness = std::sqrt(n) * m3 / std::pow(m2, 1.5);
    s.excess_kurtosis = n * m4 / (m2 * m2) - 3.0;
  }
  if (reference_mean && reference_var) s.ks_distance = ks_normal(samples, *reference_mean, *reference_var);
  return s;
}

double normal_cdf(double x, double mean, double var) {
  return 0.5 * std::erfc(-(x - mean) / std::sqrt(2.0 * var));
}

double ks_normal(std::vector<double> samples, double mean, double var) {
  if (samples.empty()) throw ParameterError("ks_normal: no samples");
  if (!(var > 0.0)) throw ParameterError("ks_normal: variance must be positive");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = normal_cdf(samples[i], mean, var);
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw ParameterError("ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

}  // namespace bssk
