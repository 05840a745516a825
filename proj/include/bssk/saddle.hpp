#pragma once

// The exponent G of the double contour integral, its real critical point and
// the asymptotic expansions of Q_n in both regimes.

#include <Eigen/Core>
#include <cmath>
#include <complex>
#include <optional>
#include <string>

#include "bssk/errors.hpp"
#include "bssk/spectra.hpp"
#include "bssk/theory.hpp"

namespace bssk {

struct SaddleInput {
  Eigen::Index n = 0;
  double alpha_n = 0.0;
  double b_n = 1.0;
  Eigen::VectorXd eigenvalues;  ///< descending, length n
};

/// Validates lengths, ordering and signs.
SaddleInput make_saddle_input(Eigen::VectorXd eigenvalues, double alpha_n, double b_n);

/// n = N2, alpha_n = (N1 - N2) / (2 N2), B_n = N1 beta / sqrt(N2 N).
SaddleInput saddle_input(const Spectrum& spectrum, double beta);

/// Limiting (alpha, B) for the ratios: ((r1 - r2)/(2 r2), r1 beta / sqrt(r2)), r1 >= r2.
std::pair<double, double> mapped_parameters(double beta, double r1, double r2);

template <typename Real>
struct GEval {
  std::complex<Real> value, d1, d2, d11, d12, d22;
};

/// G(z1, z2) = B (z1 + z2) - (1/2n) sum log(4 z1 z2 - mu_i) - alpha log z1 and its
/// analytic first and second partials; principal logarithm per factor.
template <typename Real>
GEval<Real> g_eval(const SaddleInput& in, std::complex<Real> z1, std::complex<Real> z2) {
  using C = std::complex<Real>;
  if (z1.imag() == Real(0) && z1.real() <= Real(0)) throw DomainError("g_eval: z1 on the branch cut of log z1");
  const C w = Real(4) * z1 * z2;
  C log_sum(0), s1(0), s2(0);
  for (Eigen::Index i = 0; i < in.n; ++i) {
    const C f = w - static_cast<Real>(in.eigenvalues[i]);
    if (f.imag() == Real(0) && f.real() <= Real(0))
      throw DomainError("g_eval: 4 z1 z2 - mu_i on the branch cut for i = " + std::to_string(i + 1));
    const C inv = Real(1) / f;
    log_sum += std::log(f);
    s1 += inv;
    s2 += inv * inv;
  }
  const Real n = static_cast<Real>(in.n);
  log_sum /= n;
  s1 /= n;
  s2 /= n;
  const Real b = static_cast<Real>(in.b_n), alpha = static_cast<Real>(in.alpha_n);
  GEval<Real> g;
  g.value = b * (z1 + z2) - Real(0.5) * log_sum - alpha * std::log(z1);
  g.d1 = b - Real(2) * z2 * s1 - alpha / z1;
  g.d2 = b - Real(2) * z1 * s1;
  g.d11 = Real(8) * z2 * z2 * s2 + alpha / (z1 * z1);
  g.d22 = Real(8) * z1 * z1 * s2;
  g.d12 = Real(-2) * s1 + Real(8) * z1 * z2 * s2;
  return g;
}

struct SaddlePoint {
  double gamma = 0.0;
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  double residual = 0.0;  ///< |L - R| / R at gamma
};

/// L(gamma)/R(gamma) with L = (1/n) sum 1/(gamma - mu_i), R = B^2/(alpha + sqrt(alpha^2 + gamma B^2)).
double gamma_ratio(const SaddleInput& in, double gamma);

SaddlePoint solve_gamma(const SaddleInput& in);

struct AsymptoticQ {
  Regime regime = Regime::high;
  std::optional<double> a_hat;
  std::optional<double> d_hat;
  std::optional<double> e_hat;
  std::optional<double> l_hat;
  std::optional<double> z_c;
  double log_q_over_n = 0.0;
};

/// Root of s(z) = B^2/(alpha + sqrt(alpha^2 + z B^2)) on (d_+, inf); requires B < B_c.
double z_critical_b_level(double alpha, double b, const MPLaw& law);

AsymptoticQ q_high_asymptotic(const SaddleInput& in, const MPLaw& law);

AsymptoticQ q_low_asymptotic(const SaddleInput& in, const MPLaw& law);

/// n G(g1, g2) + log pi - log n - 1/2 log D at the saddle, D = G11 G22 - G12^2.
double q_saddle_value(const SaddleInput& in);

/// Hessian determinant of G at the saddle.
double saddle_discriminant(const SaddleInput& in, const SaddlePoint& point);

/// 0 < gamma - mu_1 <= n^{epsilon - 1}.
bool low_gamma_bounds_check(const SaddleInput& in, const MPLaw& law, const SaddlePoint& point, double epsilon);

}  // namespace bssk
