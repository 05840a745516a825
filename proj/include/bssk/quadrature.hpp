#pragma once

#include <Eigen/Core>
#include <cmath>
#include <functional>

namespace bssk {

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};

/// n-point rule, nodes ascending. Newton iteration on P_n from the Chebyshev guess.
GaussRule gauss_legendre(int n);

/// The 16-point rule, built once.
const GaussRule& gauss_legendre16();

/// Composite rule: `panels` equal panels of `rule` on [a, b]; nodes ascending.
GaussRule composite_rule(double a, double b, int panels, const GaussRule& rule = gauss_legendre16());

template <typename F>
double integrate_panels(F&& f, double a, double b, int panels) {
  const auto& rule = gauss_legendre16();
  const double h = (b - a) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * h;
    double s = 0.0;
    for (Eigen::Index i = 0; i < rule.nodes.size(); ++i) s += rule.weights[i] * f(mid + 0.5 * h * rule.nodes[i]);
    total += 0.5 * h * s;
  }
  return total;
}

/// Adaptive bisection on 16-point panels until the one-panel and two-panel
/// estimates agree to `tol` (absolute, distributed over subintervals).
double integrate_adaptive(const std::function<double(double)>& f, double a, double b, double tol = 1e-13,
                          int max_depth = 40);

}  // namespace bssk
