#include "bssk/saddle.hpp"

#include <algorithm>
#include <limits>
#include <numbers>

namespace bssk {

namespace {

constexpr double kBoundaryBand = 1e-12;

double rhs(const SaddleInput& in, double gamma) {
  const double b2 = in.b_n * in.b_n;
  return b2 / (in.alpha_n + std::sqrt(in.alpha_n * in.alpha_n + gamma * b2));
}

Regime b_regime(const SaddleInput& in, const MPLaw& law) {
  const double bc = b_critical(in.alpha_n, law);
  if (std::abs(in.b_n - bc) <= kBoundaryBand * bc) return Regime::critical;
  return in.b_n < bc ? Regime::high : Regime::low;
}

}  // namespace

SaddleInput make_saddle_input(Eigen::VectorXd eigenvalues, double alpha_n, double b_n) {
  if (eigenvalues.size() < 1) throw DimensionError("saddle input: empty spectrum");
  if (!(alpha_n >= 0.0)) throw ParameterError("saddle input: alpha_n must be non-negative");
  if (!(b_n > 0.0)) throw ParameterError("saddle input: b_n must be positive");
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
    if (!(eigenvalues[i] >= 0.0)) throw ParameterError("saddle input: negative eigenvalue");
    if (i > 0 && eigenvalues[i] > eigenvalues[i - 1]) throw ParameterError("saddle input: eigenvalues not descending");
  }
  SaddleInput in;
  in.n = eigenvalues.size();
  in.alpha_n = alpha_n;
  in.b_n = b_n;
  in.eigenvalues = std::move(eigenvalues);
  return in;
}

SaddleInput saddle_input(const Spectrum& spectrum, double beta) {
  if (!(beta > 0.0)) throw ParameterError("saddle_input: beta must be positive");
  const double n1 = static_cast<double>(spectrum.n1), n2 = static_cast<double>(spectrum.n2);
  return make_saddle_input(spectrum.values, (n1 - n2) / (2.0 * n2), n1 * beta / std::sqrt(n2 * (n1 + n2)));
}

std::pair<double, double> mapped_parameters(double beta, double r1, double r2) {
  const MPLaw law = mp_law(r1, r2);
  return {(law.r1 - law.r2) / (2.0 * law.r2), law.r1 * beta / std::sqrt(law.r2)};
}

double gamma_ratio(const SaddleInput& in, double gamma) {
  double l = 0.0;
  for (Eigen::Index i = 0; i < in.n; ++i) l += 1.0 / (gamma - in.eigenvalues[i]);
  return l / static_cast<double>(in.n) / rhs(in, gamma);
}

SaddlePoint solve_gamma(const SaddleInput& in) {
  const double mu1 = in.eigenvalues[0];
  const double scale = std::max(1.0, mu1);
  double lo = mu1 + 1e-14 * scale;
  double span = std::max(10.0, 4.0 * scale / (in.b_n * in.b_n));
  double hi = mu1 + span;
  int doublings = 0;
  while (gamma_ratio(in, hi) > 1.0) {
    if (++doublings > 200) throw SolverError("solve_gamma: bracket expansion failed");
    span *= 2.0;
    hi = mu1 + span;
  }
  if (!(gamma_ratio(in, lo) > 1.0)) throw SolverError("solve_gamma: ratio does not exceed 1 at the pole guard");
  for (int it = 0; it < 400 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (gamma_ratio(in, mid) > 1.0 ? lo : hi) = mid;
  }
  double gamma = 0.5 * (lo + hi);

  const double inv_n = 1.0 / static_cast<double>(in.n);
  const double b2 = in.b_n * in.b_n;
  auto residual = [&](double g, double* slope) {
    double l = 0.0, l2 = 0.0;
    for (Eigen::Index i = 0; i < in.n; ++i) {
      const double inv = 1.0 / (g - in.eigenvalues[i]);
      l += inv;
      l2 += inv * inv;
    }
    const double root = std::sqrt(in.alpha_n * in.alpha_n + g * b2);
    const double r = b2 / (in.alpha_n + root);
    if (slope) *slope = -l2 * inv_n + r * r / (2.0 * root);
    return l * inv_n - r;
  };
  for (int step = 0; step < 3; ++step) {
    double slope = 0.0;
    const double f = residual(gamma, &slope);
    if (f == 0.0 || slope == 0.0) break;
    const double next = gamma - f / slope;
    if (!(next > mu1) || std::abs(residual(next, nullptr)) >= std::abs(f)) break;
    gamma = next;
  }

  SaddlePoint p;
  p.gamma = gamma;
  const double root = std::sqrt(in.alpha_n * in.alpha_n + gamma * b2);
  p.gamma1 = (in.alpha_n + root) / (2.0 * in.b_n);
  p.gamma2 = gamma * in.b_n / (2.0 * (in.alpha_n + root));
  p.residual = std::abs(residual(gamma, nullptr)) / rhs(in, gamma);
  return p;
}

double z_critical_b_level(double alpha, double b, const MPLaw& law) {
  const double b2 = b * b;
  auto ratio = [&](double z) { return mp_stieltjes(law, z) * (alpha + std::sqrt(alpha * alpha + z * b2)) / b2; };
  if (!(ratio(law.d_plus) > 1.0)) throw RegimeError("z_critical: B is not below B_c");
  double lo = law.d_plus, hi = 2.0 * law.d_plus + 1.0;
  int doublings = 0;
  while (ratio(hi) > 1.0) {
    if (++doublings > 200) throw SolverError("z_critical: bracket expansion failed");
    hi = law.d_plus + 2.0 * (hi - law.d_plus);
  }
  for (int it = 0; it < 400 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (ratio(mid) > 1.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

AsymptoticQ q_high_asymptotic(const SaddleInput& in, const MPLaw& law) {
  if (b_regime(in, law) != Regime::high) throw RegimeError("q_high_asymptotic: requires B < B_c");
  const double alpha = in.alpha_n, b = in.b_n;
  const double zc = z_critical_b_level(alpha, b, law);
  if (!(zc > in.eigenvalues[0])) throw RareEventError("q_high_asymptotic: z_c <= mu_1");
  const double root = std::sqrt(alpha * alpha + zc * b * b);
  const double h = mp_log_transform(law, zc);
  const double h1 = mp_stieltjes(law, zc);
  const double h2 = mp_stieltjes_derivative(law, zc);
  AsymptoticQ q;
  q.regime = Regime::high;
  q.z_c = zc;
  q.a_hat = root - alpha * std::log((alpha + root) / (2.0 * b)) - 0.5 * h;
  q.d_hat = -8.0 * alpha * h2 - 8.0 * zc * h1 * h2 - 4.0 * h1 * h1;
  const double n = static_cast<double>(in.n);
  double linear = 0.0;
  for (Eigen::Index i = 0; i < in.n; ++i) linear += std::log(zc - in.eigenvalues[i]);
  linear -= n * h;
  q.log_q_over_n = *q.a_hat - linear / (2.0 * n) - std::log(n) / n +
                   std::log(4.0 * std::numbers::pi * std::numbers::pi / *q.d_hat) / (2.0 * n);
  return q;
}

AsymptoticQ q_low_asymptotic(const SaddleInput& in, const MPLaw& law) {
  if (b_regime(in, law) != Regime::low) throw RegimeError("q_low_asymptotic: requires B > B_c");
  const double alpha = in.alpha_n, b = in.b_n;
  const double root = std::sqrt(alpha * alpha + law.d_plus * b * b);
  AsymptoticQ q;
  q.regime = Regime::low;
  q.e_hat = root - alpha * std::log((alpha + root) / (2.0 * b)) - 0.5 * mp_log_transform(law, law.d_plus);
  q.l_hat = b * b / (2.0 * (alpha + root)) - 0.5 * mp_stieltjes(law, law.d_plus);
  q.log_q_over_n = *q.e_hat + (in.eigenvalues[0] - law.d_plus) * *q.l_hat;
  return q;
}

double saddle_discriminant(const SaddleInput& in, const SaddlePoint& point) {
  const auto g = g_eval<double>(in, point.gamma1, point.gamma2);
  return (g.d11 * g.d22 - g.d12 * g.d12).real();
}

double q_saddle_value(const SaddleInput& in) {
  const SaddlePoint p = solve_gamma(in);
  const auto g = g_eval<double>(in, p.gamma1, p.gamma2);
  const double d = (g.d11 * g.d22 - g.d12 * g.d12).real();
  if (!(d > 0.0)) throw ExpansionError("q_saddle_value: nonpositive discriminant at the saddle");
  const double n = static_cast<double>(in.n);
  return n * g.value.real() + std::log(2.0 * std::numbers::pi) - std::log(n) - 0.5 * std::log(d);
}

bool low_gamma_bounds_check(const SaddleInput& in, const MPLaw& law, const SaddlePoint& point, double epsilon) {
  if (b_regime(in, law) != Regime::low) throw RegimeError("low_gamma_bounds_check: requires B > B_c");
  const double gap = point.gamma - in.eigenvalues[0];
  return gap > 0.0 && gap <= std::pow(static_cast<double>(in.n), epsilon - 1.0);
}

}  // namespace bssk
