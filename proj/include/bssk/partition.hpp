#pragma once

// Finite-size partition functions: sphere Monte Carlo, contour quadrature of Q_n,
// and the prefactor that links Q_n to Z.

#include <cstdint>
#include <optional>
#include <string_view>

#include "bssk/disorder.hpp"
#include "bssk/saddle.hpp"
#include "bssk/spectra.hpp"

namespace bssk {

enum class EstimateMethod { sphere_mc, contour, asymptotic };

std::string_view to_string(EstimateMethod method);

struct PartitionEstimate {
  double value = 0.0;
  double log_value = 0.0;  ///< finite even when value overflows
  std::optional<double> std_error;
  EstimateMethod method = EstimateMethod::sphere_mc;
};

/// log |S^{n-1}| = log 2 + (n/2) log pi - log Gamma(n/2).
double sphere_area_log(Eigen::Index n);

/// Mean of exp(beta <s, J t> / sqrt N) over uniform s, t on the spheres of radius
/// sqrt N1 and sqrt N2. Chunks of the sample range use derived seeds and are
/// combined in a fixed pairwise order, so the result does not depend on `workers`.
PartitionEstimate sphere_mc_partition(const DisorderMatrix& j, double beta, std::int64_t samples, std::uint64_t seed,
                                      unsigned workers = 0);

struct QuadratureSpec {
  double truncation = 0.0;  ///< half-width T in the contour parameter; 0 picks min(10/sqrt(n B), 3)
  int nodes_per_line = 640;
  int panels = 40;
};

struct ContourResult {
  double value = 0.0;
  double log_value = 0.0;
  double imag_ratio = 0.0;  ///< |Im| / |Re| of the raw quadrature sum
  double truncation = 0.0;
  int nodes_per_line = 0;
  SaddlePoint saddle;
};

/// Q_n by tensor Gauss-Legendre quadrature along contours through the saddle.
ContourResult contour_q_detail(const SaddleInput& in, const QuadratureSpec& quad = {});

double contour_q_numeric(const SaddleInput& in, const QuadratureSpec& quad = {});

/// N2 log 2 + ((N - 4)/4) log(pi^2 N / (N1^2 N2 beta^2)) - log|S^{N1-1}| - log|S^{N2-1}|.
double log_prefactor(Eigen::Index n1, Eigen::Index n2, double beta);

/// (1/N)(log Q + log_prefactor).
double assemble_free_energy(double log_q, Eigen::Index n1, Eigen::Index n2, double beta);

/// Free energy predicted from the spectrum at finite N, with exact ratios r1, r2.
double finite_n_prediction(const Spectrum& spectrum, double beta, double r1, double r2);

}  // namespace bssk
