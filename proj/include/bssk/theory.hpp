#pragma once

// Closed-form limiting constants of the bipartite spherical SK model.

#include <functional>
#include <optional>
#include <string_view>

#include "bssk/spectra.hpp"

namespace bssk {

enum class Regime { high, low, critical };

std::string_view to_string(Regime regime);

/// beta_c = (r1 r2)^{-1/4}
double critical_beta(double r1, double r2);

/// S = (sqrt r1 - sqrt r2)^2 + 4 r1 r2 beta^2
double s_param(double beta, double r1, double r2);

/// Regime with a relative band of 1e-12 around beta_c reported as critical.
Regime classify(double beta, double r1, double r2);

/// Limiting free energy F(beta); the high-temperature branch is used on the critical band.
double limiting_free_energy(double beta, double r1, double r2);

struct RegimeConstants {
  double beta = 0.0;
  double r1 = 0.5;  ///< canonical: r1 >= r2
  double r2 = 0.5;
  double w4 = 3.0;
  double beta_c = 0.0;
  Regime regime = Regime::high;
  double s_param = 0.0;
  double f_limit = 0.0;
  std::optional<double> z_c;      ///< high only
  std::optional<double> mu;       ///< high only
  std::optional<double> sigma2;   ///< high only
  std::optional<double> a_scale;  ///< low only
};

RegimeConstants regime_constants(double beta, double r1, double r2, double w4);

/// z_c = (1 + beta^2 + r1 r2 beta^4) / (r1 beta^2), with r1 >= r2.
double z_critical(double beta, double r1, double r2);

/// Tracy-Widom scale A(beta, r1, r2) of the low-temperature fluctuations.
double tw_scale(double beta, double r1, double r2);

/// Coefficient of (mu_1 - d_+) in the low-temperature finite-N free energy.
double edge_coefficient(double beta, double r1, double r2);

struct AuffingerChenResult {
  double value = 0.0;
  double a = 0.0;
  double b = 0.0;
};

/// P(a, b) on [0, 1)^2.
double auffinger_chen_objective(double a, double b, double beta, double r1, double r2);

/// Closed-form minimizer of P and its value. Throws RegimeError on the critical band.
AuffingerChenResult auffinger_chen_value(double beta, double r1, double r2);

/// Independent numeric route: grid x grid search over [0,1)^2 followed by
/// successive zoomed grids around the incumbent.
AuffingerChenResult auffinger_chen_grid_minimum(double beta, double r1, double r2, int grid = 400);

/// Free energy of the (single-species) spherical SK model.
double ssk_free_energy(double beta);

/// B_c = sqrt(d_+ s(d_+)^2 + 2 alpha s(d_+)).
double b_critical(double alpha, const MPLaw& law);

struct CltConstants {
  double big_m = 0.0;
  double big_v = 0.0;
  double m_goe = 0.0;
  double v_goe = 0.0;
  double tau0 = 0.0;
  double tau1 = 0.0;
  double tau2 = 0.0;
};

/// CLT constants for phi(x) = log(z_c - x). Requires beta < beta_c.
CltConstants clt_log_constants(double beta, double r1, double r2, double w4);

/// (1/2pi) \int_{-pi}^{pi} Phi(2 cos t) cos(l t) dt, 512-node composite Gauss-Legendre.
double chebyshev_tau(const std::function<double(double)>& phi, int ell);

/// CLT constants for a general test function analytic near [d_-, d_+].
CltConstants clt_general(const std::function<double(double)>& phi, const MPLaw& law, double w4,
                         int chebyshev_nodes = 256);

}  // namespace bssk
