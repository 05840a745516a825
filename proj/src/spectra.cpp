#include "bssk/spectra.hpp"

#include <cmath>
#include <numbers>

#include "bssk/quadrature.hpp"

namespace bssk {

Spectrum gram_eigenvalues(const DisorderMatrix& j) {
  return {gram_eigenvalues(j.entries()), j.rows(), j.cols()};
}

MPLaw mp_law(double r1, double r2) {
  if (!(r1 > 0.0) || !(r2 > 0.0)) throw ParameterError("mp_law: ratios must be positive");
  if (std::abs(r1 + r2 - 1.0) > 1e-12) throw ParameterError("mp_law: ratios must sum to 1");
  MPLaw law;
  if (r1 < r2) {
    std::swap(r1, r2);
    law.swapped = true;
  }
  law.r1 = r1;
  law.r2 = r2;
  const double top = r1 + r2 + 2.0 * std::sqrt(r1 * r2);
  law.d_plus = top / r1;
  law.d_minus = (r1 - r2) * (r1 - r2) / (r1 * top);
  return law;
}

double mp_density(const MPLaw& law, double x) {
  if (!(x > law.d_minus) || !(x < law.d_plus)) return 0.0;
  const double span = std::sqrt(law.d_plus) - std::sqrt(law.d_minus);
  return 2.0 * std::sqrt((law.d_plus - x) * (x - law.d_minus)) / (std::numbers::pi * span * span * x);
}

double mp_edge_constant(const MPLaw& law) {
  const double span = std::sqrt(law.d_plus) - std::sqrt(law.d_minus);
  return 2.0 * std::sqrt(law.width()) / (std::numbers::pi * span * span * law.d_plus);
}

namespace {

// R(z) = sqrt((z - d_-)(z - d_+)) with the branch R(z) ~ z at infinity.
double branch_r(const MPLaw& law, double z) {
  // (r1 z - 1)^2 - 4 r1 r2 = r1^2 (z - d_+)(z - d_-), factored to keep accuracy at the edge
  const double root = std::sqrt(std::max((z - law.d_plus) * (z - law.d_minus), 0.0));
  return z >= law.d_plus ? root : -root;
}

}  // namespace

double mp_stieltjes(const MPLaw& law, double z) {
  if (z > law.d_minus && z < law.d_plus)
    throw DomainError("mp_stieltjes: z lies inside the support");
  if (z == 0.0) throw DomainError("mp_stieltjes: z = 0");
  const double r1 = law.r1, r2 = law.r2;
  return (r1 * z - r1 * branch_r(law, z) - (r1 - r2)) / (2.0 * r2 * z);
}

double mp_stieltjes_derivative(const MPLaw& law, double z) {
  if (!(z > law.d_plus)) throw DomainError("mp_stieltjes_derivative: need z > d_+");
  const double r1 = law.r1, r2 = law.r2;
  const double r = branch_r(law, z);
  const double dr = (r1 * z - 1.0) / (r1 * r);
  return (-r1 * dr * z + r1 * r + (r1 - r2)) / (2.0 * r2 * z * z);
}

double mp_log_transform(const MPLaw& law, double z) {
  if (!(z >= law.d_plus)) throw DomainError("mp_log_transform: need z >= d_+");
  const double r1 = law.r1, r2 = law.r2, dr = r1 - r2;
  const double r = branch_r(law, z);
  double value = r1 * z - 1.0 - r1 * r - dr * std::log(z) + std::log((r1 * z - 1.0 + r1 * r) / (2.0 * r1));
  if (dr != 0.0) value += dr * std::log((r1 * z - dr * r1 * r - dr * dr) / (2.0 * r1 * r2 * z));
  return value / (2.0 * r2);
}

double mp_tail_mass(const MPLaw& law, double g) {
  if (g <= law.d_minus) return 1.0;
  if (g >= law.d_plus) return 0.0;
  // x = d_- + w sin^2(t/2) removes both square-root edges.
  const double w = law.width();
  const double span = std::sqrt(law.d_plus) - std::sqrt(law.d_minus);
  const double scale = 2.0 * w * w / (std::numbers::pi * span * span);
  auto integrand = [&](double t) {
    const double s = std::sin(0.5 * t), c = std::cos(0.5 * t);
    const double x = law.d_minus + w * s * s;
    return scale * s * s * c * c / x;
  };
  const double t0 = 2.0 * std::asin(std::sqrt(std::clamp((g - law.d_minus) / w, 0.0, 1.0)));
  return integrate_adaptive(integrand, t0, std::numbers::pi, 1e-15);
}

ClassicalLocations classical_locations(const MPLaw& law, Eigen::Index n) {
  if (n < 1) throw DimensionError("classical_locations: n must be positive");
  const double w = law.width();
  auto location = [&](double t) {
    const double s = std::sin(0.5 * t);
    return law.d_minus + w * s * s;
  };
  ClassicalLocations out{Eigen::VectorXd(n)};
  for (Eigen::Index k = 1; k <= n; ++k) {
    const double target = (k - 0.5) / static_cast<double>(n);
    double lo = 0.0, hi = std::numbers::pi;  // tail(lo) > target > tail(hi)
    for (int iter = 0; iter < 60; ++iter) {
      const double mid = 0.5 * (lo + hi);
      if (mp_tail_mass(law, location(mid)) > target)
        lo = mid;
      else
        hi = mid;
    }
    out.g[k - 1] = location(0.5 * (lo + hi));
  }
  return out;
}

RigidityReport rigidity_report(const Spectrum& spectrum, const ClassicalLocations& locations, double epsilon) {
  const Eigen::Index n = spectrum.values.size();
  if (locations.g.size() != n) throw DimensionError("rigidity_report: length mismatch");
  RigidityReport report;
  const double scale = std::pow(static_cast<double>(n), -2.0 / 3.0 + epsilon);
  for (Eigen::Index k = 1; k <= n; ++k) {
    const double khat = static_cast<double>(std::min(k, n + 1 - k));
    const double ratio = std::abs(spectrum.values[k - 1] - locations.g[k - 1]) / (std::pow(khat, -1.0 / 3.0) * scale);
    if (ratio > 1.0) ++report.violations;
    if (ratio > report.max_ratio) {
      report.max_ratio = ratio;
      report.worst_index = k;
    }
  }
  return report;
}

}  // namespace bssk
