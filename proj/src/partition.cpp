#include "bssk/partition.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <vector>

#include "bssk/errors.hpp"
#include "bssk/parallel.hpp"
#include "bssk/quadrature.hpp"
#include "bssk/random.hpp"
#include "bssk/theory.hpp"

namespace bssk {

namespace {

constexpr std::int64_t kChunk = 1 << 16;

// Weights of a chunk are stored as exp(shift) * (mean, m2) so that merges never overflow.
struct ChunkStats {
  std::int64_t count = 0;
  double shift = -std::numeric_limits<double>::infinity();
  double mean = 0.0;
  double m2 = 0.0;
};

ChunkStats merge(const ChunkStats& a, const ChunkStats& b) {
  if (a.count == 0) return b;
  if (b.count == 0) return a;
  ChunkStats out;
  out.count = a.count + b.count;
  out.shift = std::max(a.shift, b.shift);
  const double fa = std::exp(a.shift - out.shift), fb = std::exp(b.shift - out.shift);
  const double ma = a.mean * fa, mb = b.mean * fb;
  const double na = static_cast<double>(a.count), nb = static_cast<double>(b.count);
  const double delta = mb - ma;
  out.mean = ma + delta * nb / (na + nb);
  out.m2 = a.m2 * fa * fa + b.m2 * fb * fb + delta * delta * na * nb / (na + nb);
  return out;
}

ChunkStats reduce_pairwise(std::vector<ChunkStats> stats) {
  if (stats.empty()) return {};
  while (stats.size() > 1) {
    std::vector<ChunkStats> next((stats.size() + 1) / 2);
    for (std::size_t i = 0; i < next.size(); ++i)
      next[i] = 2 * i + 1 < stats.size() ? merge(stats[2 * i], stats[2 * i + 1]) : stats[2 * i];
    stats = std::move(next);
  }
  return stats.front();
}

using Complex = std::complex<double>;

struct ContourLine {
  std::vector<Complex> z, log_z, dz;
  std::vector<double> weight;
};

ContourLine make_line(double gamma, double truncation, int panels) {
  const GaussRule rule = composite_rule(-truncation, truncation, panels);
  const double c = 0.5 / gamma;
  ContourLine line;
  for (Eigen::Index k = 0; k < rule.nodes.size(); ++k) {
    const double t = rule.nodes[k];
    const Complex z(gamma - c * t * t, t);
    line.z.push_back(z);
    line.log_z.push_back(std::log(z));
    line.dz.push_back(Complex(-2.0 * c * t, 1.0));
    line.weight.push_back(rule.weights[k]);
  }
  return line;
}

// n G along the contours, with log(4 z1 z2 - mu) split as
// log 4 + log z1 + log z2 + log(1 - mu/(4 z1 z2)); every piece stays on its principal branch there.
struct Exponent {
  const SaddleInput& in;

  Complex operator()(Complex z1, Complex log_z1, Complex z2, Complex log_z2, double* args = nullptr) const {
    const double n = static_cast<double>(in.n);
    const Complex w = 4.0 * z1 * z2;
    Complex tail(0.0);
    for (Eigen::Index i = 0; i < in.n; ++i) {
      const Complex f = 1.0 - in.eigenvalues[i] / w;
      tail += std::log(f);
      if (args) args[i] = std::arg(f);
    }
    return n * in.b_n * (z1 + z2) - 0.5 * n * (std::log(4.0) + log_z1 + log_z2) - 0.5 * tail -
           n * in.alpha_n * log_z1;
  }
};

double boundary_decay(const SaddleInput& in, const SaddlePoint& p, double truncation, int panels) {
  const ContourLine l1 = make_line(p.gamma1, truncation, panels), l2 = make_line(p.gamma2, truncation, panels);
  const Exponent exponent{in};
  const double centre = exponent(p.gamma1, std::log(p.gamma1), p.gamma2, std::log(p.gamma2)).real();
  auto log_mag = [&](Complex z1, Complex z2, double t1, double t2) {
    const double c1 = 0.5 / p.gamma1, c2 = 0.5 / p.gamma2;
    const Complex d1(-2.0 * c1 * t1, 1.0), d2(-2.0 * c2 * t2, 1.0);
    return exponent(z1, std::log(z1), z2, std::log(z2)).real() + std::log(std::abs(d1) * std::abs(d2)) - centre;
  };
  double worst = -std::numeric_limits<double>::infinity();
  for (const double s : {-truncation, truncation}) {
    const Complex e1(p.gamma1 - 0.5 / p.gamma1 * s * s, s), e2(p.gamma2 - 0.5 / p.gamma2 * s * s, s);
    for (std::size_t k = 0; k < l1.z.size(); ++k) {
      worst = std::max(worst, log_mag(e1, l2.z[k], s, l2.z[k].imag()));
      worst = std::max(worst, log_mag(l1.z[k], e2, l1.z[k].imag(), s));
    }
  }
  return worst;
}

}  // namespace

std::string_view to_string(EstimateMethod method) {
  switch (method) {
    case EstimateMethod::sphere_mc: return "sphere_mc";
    case EstimateMethod::contour: return "contour";
    case EstimateMethod::asymptotic: return "asymptotic";
  }
  return "unknown";
}

double sphere_area_log(Eigen::Index n) {
  if (n < 1) throw DimensionError("sphere_area_log: n must be at least 1");
  const double half = 0.5 * static_cast<double>(n);
  return std::numbers::ln2 + half * std::log(std::numbers::pi) - std::lgamma(half);
}

PartitionEstimate sphere_mc_partition(const DisorderMatrix& j, double beta, std::int64_t samples, std::uint64_t seed,
                                      unsigned workers) {
  if (samples < 1) throw ParameterError("sphere_mc_partition: samples must be at least 1");
  const RowMatrix& J = j.entries();
  const Eigen::Index n1 = J.rows(), n2 = J.cols();
  const double scale = beta * std::sqrt(static_cast<double>(n1) * static_cast<double>(n2) / static_cast<double>(n1 + n2));
  const std::uint64_t pairs = static_cast<std::uint64_t>((n1 + n2 + 1) / 2);
  const std::size_t chunks = static_cast<std::size_t>((samples + kChunk - 1) / kChunk);
  std::vector<ChunkStats> stats(chunks);

  parallel_for(chunks, workers, [&](std::size_t c) {
    const CounterStream stream(derive_seed(seed, c));
    const std::int64_t begin = static_cast<std::int64_t>(c) * kChunk;
    const std::int64_t count = std::min(kChunk, samples - begin);
    std::vector<double> log_w(static_cast<std::size_t>(count));
    Eigen::VectorXd g(2 * pairs), jt(n1);
    for (std::int64_t k = 0; k < count; ++k) {
      for (std::uint64_t p = 0; p < pairs; ++p) {
        const auto z = stream.normal_pair(static_cast<std::uint64_t>(k) * pairs + p);
        g[2 * p] = z[0];
        g[2 * p + 1] = z[1];
      }
      const auto s = g.head(n1);
      const auto t = g.segment(n1, n2);
      jt.noalias() = J * t;
      const double h = s.dot(jt) / (s.norm() * t.norm());
      log_w[static_cast<std::size_t>(k)] = scale * h;
    }
    ChunkStats out;
    out.count = count;
    out.shift = *std::max_element(log_w.begin(), log_w.end());
    double mean = 0.0, m2 = 0.0;
    for (std::int64_t k = 0; k < count; ++k) {
      const double w = std::exp(log_w[static_cast<std::size_t>(k)] - out.shift);
      const double delta = w - mean;
      mean += delta / static_cast<double>(k + 1);
      m2 += delta * (w - mean);
    }
    out.mean = mean;
    out.m2 = m2;
    stats[c] = out;
  });

  const ChunkStats total = reduce_pairwise(std::move(stats));
  PartitionEstimate est;
  est.method = EstimateMethod::sphere_mc;
  est.log_value = total.shift + std::log(total.mean);
  est.value = std::exp(est.log_value);
  const double n = static_cast<double>(total.count);
  est.std_error = total.count > 1 ? std::exp(total.shift) * std::sqrt(total.m2 / (n - 1.0) / n) : 0.0;
  return est;
}

ContourResult contour_q_detail(const SaddleInput& in, const QuadratureSpec& quad) {
  if (quad.nodes_per_line < 64) throw ParameterError("contour_q_numeric: nodes_per_line must be at least 64");
  if (quad.truncation < 0.0) throw ParameterError("contour_q_numeric: truncation must be positive");
  const SaddlePoint p = solve_gamma(in);
  const double nb = static_cast<double>(in.n) * in.b_n;
  const int rule_nodes = static_cast<int>(gauss_legendre16().nodes.size());

  double truncation = quad.truncation > 0.0 ? quad.truncation : std::min(10.0 / std::sqrt(nb), 3.0);
  auto panels_for = [&](double t) {
    const int by_nodes = (quad.nodes_per_line + rule_nodes - 1) / rule_nodes;
    const int by_wave = static_cast<int>(std::ceil(t * nb));
    return std::max({quad.panels, by_nodes, by_wave});
  };
  const double threshold = std::log(1e-16);
  int doublings = 0;
  while (boundary_decay(in, p, truncation, panels_for(truncation)) > threshold) {
    if (++doublings > 8) throw QuadratureError("contour_q_numeric: integrand does not decay at the truncation");
    truncation *= 2.0;
  }
  const int panels = panels_for(truncation);
  const ContourLine l1 = make_line(p.gamma1, truncation, panels), l2 = make_line(p.gamma2, truncation, panels);
  const std::size_t m1 = l1.z.size(), m2 = l2.z.size();
  const Exponent exponent{in};
  const double centre = exponent(p.gamma1, std::log(p.gamma1), p.gamma2, std::log(p.gamma2)).real();

  const auto n = static_cast<std::size_t>(in.n);
  std::vector<double> prev_row(m2 * n), row(m2 * n);
  auto check_jump = [](double a, double b) {
    if (std::abs(a - b) > std::numbers::pi) throw QuadratureError("contour_q_numeric: phase jump between adjacent nodes");
  };
  Complex sum(0.0);
  for (std::size_t a = 0; a < m1; ++a) {
    Complex inner(0.0);
    for (std::size_t b = 0; b < m2; ++b) {
      double* args = row.data() + b * n;
      const Complex e = exponent(l1.z[a], l1.log_z[a], l2.z[b], l2.log_z[b], args);
      for (std::size_t i = 0; i < n; ++i) {
        if (b > 0) check_jump(args[i], row[(b - 1) * n + i]);
        if (a > 0) check_jump(args[i], prev_row[b * n + i]);
      }
      inner += l2.weight[b] * std::exp(e - centre) * l2.dz[b];
    }
    sum += l1.weight[a] * l1.dz[a] * inner;
    std::swap(prev_row, row);
  }
  sum = -sum;

  ContourResult out;
  out.saddle = p;
  out.truncation = truncation;
  out.nodes_per_line = static_cast<int>(m1);
  out.imag_ratio = std::abs(sum.imag()) / std::abs(sum.real());
  if (!(sum.real() > 0.0)) throw QuadratureError("contour_q_numeric: nonpositive quadrature value");
  if (out.imag_ratio > 1e-8) throw QuadratureError("contour_q_numeric: imaginary residue exceeds tolerance");
  out.log_value = centre + std::log(sum.real());
  out.value = std::exp(out.log_value);
  return out;
}

double contour_q_numeric(const SaddleInput& in, const QuadratureSpec& quad) { return contour_q_detail(in, quad).value; }

double log_prefactor(Eigen::Index n1, Eigen::Index n2, double beta) {
  if (n2 < 1 || n1 < n2) throw DimensionError("log_prefactor: need n1 >= n2 >= 1");
  if (!(beta > 0.0)) throw ParameterError("log_prefactor: beta must be positive");
  const double a = static_cast<double>(n1), b = static_cast<double>(n2), n = a + b;
  return b * std::numbers::ln2 +
         (n - 4.0) / 4.0 * std::log(std::numbers::pi * std::numbers::pi * n / (a * a * b * beta * beta)) -
         sphere_area_log(n1) - sphere_area_log(n2);
}

double assemble_free_energy(double log_q, Eigen::Index n1, Eigen::Index n2, double beta) {
  return (log_q + log_prefactor(n1, n2, beta)) / static_cast<double>(n1 + n2);
}

double finite_n_prediction(const Spectrum& spectrum, double beta, double r1, double r2) {
  const MPLaw law = mp_law(r1, r2);
  const Regime regime = classify(beta, law.r1, law.r2);
  if (regime == Regime::critical) throw RegimeError("finite_n_prediction: beta is critical");
  const double f = limiting_free_energy(beta, law.r1, law.r2);
  const double n = static_cast<double>(spectrum.n1 + spectrum.n2);
  const double mu1 = spectrum.top();
  if (regime == Regime::low) return f + (mu1 - law.d_plus) * edge_coefficient(beta, law.r1, law.r2);
  const double zc = z_critical(beta, law.r1, law.r2);
  if (!(zc > mu1)) throw RareEventError("finite_n_prediction: z_c <= mu_1");
  double linear = 0.0;
  for (Eigen::Index i = 0; i < spectrum.values.size(); ++i) linear += std::log(zc - spectrum.values[i]);
  linear -= static_cast<double>(spectrum.n2) * mp_log_transform(law, zc);
  const double q = law.r1 * law.r2 * std::pow(beta, 4);
  return f - linear / (2.0 * n) + (0.5 * std::log1p(-q) - std::numbers::ln2) / n;
}

}  // namespace bssk
