#include "bssk/theory.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

#include "bssk/errors.hpp"
#include "bssk/quadrature.hpp"

namespace bssk {

namespace {

constexpr double kCriticalBand = 1e-12;

void canonicalize(double& r1, double& r2) {
  const MPLaw law = mp_law(r1, r2);
  r1 = law.r1;
  r2 = law.r2;
}

double high_free_energy(double beta, double r1, double r2) { return 0.5 * r1 * r2 * beta * beta; }

double low_free_energy(double beta, double r1, double r2) {
  const double a = std::sqrt(r1), b = std::sqrt(r2);
  const double root_s = std::sqrt(s_param(beta, r1, r2));
  return 0.5 * ((a + b) * root_s - a * b - 1.0) -
         0.25 * (r1 - r2) * std::log((root_s + a - b) / (root_s - a + b)) - 0.25 * r2 * std::log(r1) -
         0.25 * r1 * std::log(r2) - 0.5 * std::log(beta);
}

}  // namespace

std::string_view to_string(Regime regime) {
  switch (regime) {
    case Regime::high: return "high";
    case Regime::low: return "low";
    case Regime::critical: return "critical";
  }
  return "unknown";
}

double critical_beta(double r1, double r2) { return std::pow(r1 * r2, -0.25); }

double s_param(double beta, double r1, double r2) {
  const double d = std::sqrt(r1) - std::sqrt(r2);
  return d * d + 4.0 * r1 * r2 * beta * beta;
}

Regime classify(double beta, double r1, double r2) {
  const double bc = critical_beta(r1, r2);
  if (std::abs(beta - bc) <= kCriticalBand * bc) return Regime::critical;
  return beta < bc ? Regime::high : Regime::low;
}

double limiting_free_energy(double beta, double r1, double r2) {
  return classify(beta, r1, r2) == Regime::low ? low_free_energy(beta, r1, r2) : high_free_energy(beta, r1, r2);
}

double z_critical(double beta, double r1, double r2) {
  canonicalize(r1, r2);
  const double b2 = beta * beta;
  return (1.0 + b2 + r1 * r2 * b2 * b2) / (r1 * b2);
}

double tw_scale(double beta, double r1, double r2) {
  const double a = std::sqrt(r1), b = std::sqrt(r2);
  return std::cbrt(a + b) * (std::sqrt(s_param(beta, r1, r2)) - a - b) / (4.0 * std::pow(r1 * r2, 1.0 / 6.0));
}

double edge_coefficient(double beta, double r1, double r2) {
  canonicalize(r1, r2);
  const double a = std::sqrt(r1), b = std::sqrt(r2);
  return r1 * (std::sqrt(s_param(beta, r1, r2)) - a - b) / (4.0 * (a + b));
}

RegimeConstants regime_constants(double beta, double r1, double r2, double w4) {
  if (!(beta > 0.0)) throw ParameterError("regime_constants: beta must be positive");
  canonicalize(r1, r2);
  RegimeConstants rc;
  rc.beta = beta;
  rc.r1 = r1;
  rc.r2 = r2;
  rc.w4 = w4;
  rc.beta_c = critical_beta(r1, r2);
  rc.regime = classify(beta, r1, r2);
  rc.s_param = s_param(beta, r1, r2);
  rc.f_limit = limiting_free_energy(beta, r1, r2);
  if (rc.regime == Regime::high) {
    const double q = r1 * r2 * std::pow(beta, 4);
    const double log1mq = std::log1p(-q);
    rc.z_c = z_critical(beta, r1, r2);
    rc.mu = 0.25 * log1mq - std::numbers::ln2 - 0.25 * (w4 - 3.0) * q;
    rc.sigma2 = -0.5 * log1mq + 0.25 * (w4 - 3.0) * q;
  } else if (rc.regime == Regime::low) {
    rc.a_scale = tw_scale(beta, r1, r2);
  }
  return rc;
}

double auffinger_chen_objective(double a, double b, double beta, double r1, double r2) {
  return 0.5 * r1 * (a / (1.0 - a) + std::log1p(-a)) + 0.5 * r2 * (b / (1.0 - b) + std::log1p(-b)) +
         0.5 * r1 * r2 * beta * beta * (1.0 - a * b);
}

AuffingerChenResult auffinger_chen_value(double beta, double r1, double r2) {
  if (!(beta > 0.0)) throw ParameterError("auffinger_chen_value: beta must be positive");
  mp_law(r1, r2);  // validates the ratios
  const Regime regime = classify(beta, r1, r2);
  if (regime == Regime::critical) throw RegimeError("auffinger_chen_value: beta is critical");
  AuffingerChenResult out;
  if (regime == Regime::low) {
    const double sa = std::sqrt(r1), sb = std::sqrt(r2);
    const double root_s = std::sqrt(s_param(beta, r1, r2));
    const double b2 = beta * beta;
    out.a = 1.0 - (root_s - sa + sb) / (2.0 * sa * r2 * b2);
    out.b = 1.0 - (root_s + sa - sb) / (2.0 * r1 * sb * b2);
  }
  out.value = auffinger_chen_objective(out.a, out.b, beta, r1, r2);
  return out;
}

AuffingerChenResult auffinger_chen_grid_minimum(double beta, double r1, double r2, int grid) {
  constexpr double kUpper = 1.0 - 1e-12;
  auto objective = [&](double a, double b) { return auffinger_chen_objective(a, b, beta, r1, r2); };
  AuffingerChenResult best{objective(0.0, 0.0), 0.0, 0.0};
  for (int i = 0; i < grid; ++i) {
    for (int j = 0; j < grid; ++j) {
      const double a = static_cast<double>(i) / grid, b = static_cast<double>(j) / grid;
      const double v = objective(a, b);
      if (v < best.value) best = {v, a, b};
    }
  }
  double h = 1.0 / grid;
  constexpr int kZoom = 10;
  for (int round = 0; round < 60; ++round) {
    const AuffingerChenResult centre = best;
    for (int i = -kZoom; i <= kZoom; ++i) {
      for (int j = -kZoom; j <= kZoom; ++j) {
        const double a = std::clamp(centre.a + h * i / kZoom, 0.0, kUpper);
        const double b = std::clamp(centre.b + h * j / kZoom, 0.0, kUpper);
        const double v = objective(a, b);
        if (v < best.value) best = {v, a, b};
      }
    }
    h *= 0.5;
  }
  return best;
}

double ssk_free_energy(double beta) {
  if (!(beta > 0.0)) throw ParameterError("ssk_free_energy: beta must be positive");
  if (std::abs(beta - 0.5) <= 0.5 * kCriticalBand) throw RegimeError("ssk_free_energy: beta = 1/2 is critical");
  if (beta < 0.5) return beta * beta;
  return 2.0 * beta - 0.75 - 0.5 * std::log(2.0 * beta);
}

double b_critical(double alpha, const MPLaw& law) {
  if (!(alpha >= 0.0)) throw ParameterError("b_critical: alpha must be non-negative");
  const double s = mp_stieltjes(law, law.d_plus);
  return std::sqrt(law.d_plus * s * s + 2.0 * alpha * s);
}

CltConstants clt_log_constants(double beta, double r1, double r2, double w4) {
  canonicalize(r1, r2);
  if (classify(beta, r1, r2) != Regime::high) throw RegimeError("clt_log_constants: requires beta < beta_c");
  const MPLaw law = mp_law(r1, r2);
  const double q = r1 * r2 * std::pow(beta, 4);
  const double log1mq = std::log1p(-q);
  const double zt = 4.0 / law.width() * (z_critical(beta, r1, r2) - 0.5 * (law.d_plus + law.d_minus));
  CltConstants c;
  c.tau0 = std::log(law.width() / 4.0) + std::log(zt + std::sqrt(zt * zt - 4.0)) - std::numbers::ln2;
  c.tau1 = -std::sqrt(r1 * r2) * beta * beta;
  c.tau2 = -0.5 * q;
  c.m_goe = 0.5 * log1mq;
  c.v_goe = -2.0 * log1mq;
  c.big_m = c.m_goe - (w4 - 3.0) * c.tau2;
  c.big_v = c.v_goe + (w4 - 3.0) * c.tau1 * c.tau1;
  return c;
}

double chebyshev_tau(const std::function<double(double)>& phi, int ell) {
  if (ell < 0) throw ParameterError("chebyshev_tau: ell must be non-negative");
  // The integrand is even in t, so integrate over [0, pi] and divide by pi.
  auto integrand = [&](double t) {
    const double v = phi(2.0 * std::cos(t));
    if (!std::isfinite(v)) throw EvaluationError("chebyshev_tau: non-finite function value");
    return v * std::cos(ell * t);
  };
  return integrate_panels(integrand, 0.0, std::numbers::pi, 32) / std::numbers::pi;
}

CltConstants clt_general(const std::function<double(double)>& phi, const MPLaw& law, double w4,
                         int chebyshev_nodes) {
  const double half_width = 0.25 * law.width(), centre = 0.5 * (law.d_plus + law.d_minus);
  auto mapped = [&](double y) {
    const double v = phi(half_width * y + centre);
    if (!std::isfinite(v)) throw EvaluationError("clt_general: test function is singular on the support");
    return v;
  };
  CltConstants c;
  c.tau0 = chebyshev_tau(mapped, 0);
  c.tau1 = chebyshev_tau(mapped, 1);
  c.tau2 = chebyshev_tau(mapped, 2);
  c.m_goe = 0.25 * (mapped(-2.0) + mapped(2.0)) - 0.5 * c.tau0;

  // x = 2 cos t turns dx / sqrt(4 - x^2) into dt; midpoint nodes in t are Gauss-Chebyshev.
  const int m = chebyshev_nodes;
  std::vector<double> x(m), value(m), slope(m);
  constexpr double kStep = 1e-7;
  for (int k = 0; k < m; ++k) {
    x[k] = 2.0 * std::cos((k + 0.5) * std::numbers::pi / m);
    value[k] = mapped(x[k]);
    slope[k] = (mapped(x[k] + kStep) - mapped(x[k] - kStep)) / (2.0 * kStep);
  }
  double sum = 0.0;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      double dd;
      if (std::abs(x[i] - x[j]) < 1e-6) {
        const double mid = 0.5 * (x[i] + x[j]);
        dd = i == j ? slope[i] : (mapped(mid + kStep) - mapped(mid - kStep)) / (2.0 * kStep);
      } else {
        dd = (value[i] - value[j]) / (x[i] - x[j]);
      }
      sum += dd * dd * (4.0 - x[i] * x[j]);
    }
  }
  const double weight = std::numbers::pi / m;
  c.v_goe = sum * weight * weight / (2.0 * std::numbers::pi * std::numbers::pi);
  c.big_m = c.m_goe - (w4 - 3.0) * c.tau2;
  c.big_v = c.v_goe + (w4 - 3.0) * c.tau1 * c.tau1;
  return c;
}

}  // namespace bssk
