#pragma once

// Gram-matrix spectra and Marchenko-Pastur analytics.

#include <Eigen/Core>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <string>

#include "bssk/disorder.hpp"
#include "bssk/errors.hpp"

namespace bssk {

/// Eigenvalues of (1/rows) J^T J, sorted descending. J may be any dense Eigen
/// expression with rows >= cols; tiny negative round-off is clamped to zero.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> gram_eigenvalues(const Eigen::MatrixBase<Derived>& j) {
  using Scalar = typename Derived::Scalar;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  if (j.rows() < j.cols()) throw DimensionError("gram_eigenvalues: need rows >= cols");
  const Eigen::Index n = j.cols();
  Matrix s = Matrix::Zero(n, n);
  s.template selfadjointView<Eigen::Lower>().rankUpdate(j.transpose(), Scalar(1) / Scalar(j.rows()));
  Eigen::SelfAdjointEigenSolver<Matrix> solver(s, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw SolverError("gram_eigenvalues: QL iteration did not converge (n = " + std::to_string(n) + ")");
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> values = solver.eigenvalues().reverse();
  const Scalar top = values.size() ? std::max(values[0], Scalar(0)) : Scalar(0);
  const Scalar tol = Scalar(1e-10) * top;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (values[i] < -tol)
      throw SolverError("gram_eigenvalues: eigenvalue " + std::to_string(i) + " is negative beyond tolerance");
    values[i] = std::max(values[i], Scalar(0));
  }
  return values;
}

struct Spectrum {
  Eigen::VectorXd values;  ///< mu_1 >= ... >= mu_n2 >= 0
  Eigen::Index n1 = 0;
  Eigen::Index n2 = 0;

  double top() const { return values[0]; }
};

Spectrum gram_eigenvalues(const DisorderMatrix& j);

/// Marchenko-Pastur law with ratios r1 >= r2 (swapped on construction if needed).
struct MPLaw {
  double r1 = 0.5;
  double r2 = 0.5;
  double d_minus = 0.0;
  double d_plus = 4.0;
  bool swapped = false;

  double width() const { return d_plus - d_minus; }
};

MPLaw mp_law(double r1, double r2);

double mp_density(const MPLaw& law, double x);

/// c with density(x) ~ c sqrt(d_+ - x) as x -> d_+.
double mp_edge_constant(const MPLaw& law);

/// Stieltjes transform s(z) = \int dmu(x)/(z - x) for real z outside (d_-, d_+), z != 0.
double mp_stieltjes(const MPLaw& law, double z);

/// s'(z) = -\int dmu(x)/(z - x)^2 for z > d_+.
double mp_stieltjes_derivative(const MPLaw& law, double z);

/// H(z) = \int log(z - x) dmu(x) for z >= d_+.
double mp_log_transform(const MPLaw& law, double z);

/// \int_g^{d_+} dmu.
double mp_tail_mass(const MPLaw& law, double g);

struct ClassicalLocations {
  Eigen::VectorXd g;  ///< strictly decreasing, tail mass of g_k is (k - 1/2)/n
};

ClassicalLocations classical_locations(const MPLaw& law, Eigen::Index n);

struct RigidityReport {
  double max_ratio = 0.0;
  int violations = 0;
  Eigen::Index worst_index = 0;  ///< 1-based k of max_ratio
};

/// max_k |mu_k - g_k| / (khat^{-1/3} n^{-2/3 + epsilon}), khat = min(k, n + 1 - k).
RigidityReport rigidity_report(const Spectrum& spectrum, const ClassicalLocations& locations, double epsilon);

}  // namespace bssk
