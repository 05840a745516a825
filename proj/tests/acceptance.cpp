// Acceptance suite: one PASS/FAIL line per criterion. Tolerances are fixed here.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "bssk/disorder.hpp"
#include "bssk/experiments.hpp"
#include "bssk/partition.hpp"
#include "bssk/quadrature.hpp"
#include "bssk/saddle.hpp"
#include "bssk/spectra.hpp"
#include "bssk/theory.hpp"

using namespace bssk;

namespace {

struct Checks {
  std::vector<std::string> failed;
  std::string notes;

  void expect(bool ok, const std::string& what) {
    if (!ok) failed.push_back(what);
  }
  void note(const std::string& s) {
    if (!notes.empty()) notes += "; ";
    notes += s;
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

int failures = 0;

void criterion(int id, const char* name, double budget_s, const std::function<void(Checks&)>& body) {
  Checks c;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.failed.push_back(std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  c.expect(secs < budget_s, "runtime " + fmt("%.1f", secs) + " s over budget " + fmt("%.0f", budget_s) + " s");
  const bool ok = c.failed.empty();
  if (!ok) ++failures;
  std::printf("%s [%d] %s (%.1f s)", ok ? "PASS" : "FAIL", id, name, secs);
  if (!c.notes.empty()) std::printf(" | %s", c.notes.c_str());
  for (const auto& f : c.failed) std::printf("\n       - %s", f.c_str());
  std::printf("\n");
  std::fflush(stdout);
}

template <typename F>
double against_density(const MPLaw& law, F&& f) {
  const double c = 0.5 * (law.d_plus + law.d_minus), h = 0.5 * law.width();
  const double norm = 2.0 / (std::numbers::pi * std::pow(std::sqrt(law.d_plus) - std::sqrt(law.d_minus), 2));
  return integrate_panels(
      [&](double t) {
        const double x = c + h * std::cos(t), s = std::sin(t);
        return norm * h * h * s * s / x * f(x);
      },
      0.0, std::numbers::pi, 64);
}

SaddleInput seeded(Eigen::Index n1, Eigen::Index n2, double beta, std::uint64_t seed) {
  return saddle_input(gram_eigenvalues(sample_disorder(make_distribution(DistributionKind::gaussian), n1, n2, seed)),
                      beta);
}

void contour_oracle(Checks& c) {
  Eigen::VectorXd mu(1);
  mu << 0.0;
  const double v = contour_q_numeric(make_saddle_input(mu, 0.0, 1.0));
  c.note("Q = " + fmt("%.12f", v));
  c.expect(std::abs(v - 2.0 * std::numbers::pi) <= 1e-6, "Q differs from 2 pi by more than 1e-6");
}

void brute_force(Checks& c) {
  const double beta = 0.5;
  const auto j = sample_disorder(make_distribution(DistributionKind::gaussian), 3, 2, 42);
  const auto s = gram_eigenvalues(j);
  const double log_q = std::log(contour_q_numeric(saddle_input(s, beta)));
  const double z_contour = std::exp(5.0 * assemble_free_energy(log_q, 3, 2, beta));
  const auto mc = sphere_mc_partition(j, beta, 10'000'000, 42);
  const double se = *mc.std_error;
  const double z = std::abs(z_contour - mc.value) / se;
  c.note("contour " + fmt("%.6f", z_contour) + ", mc " + fmt("%.6f", mc.value) + " +- " + fmt("%.6f", se) + " (" +
         fmt("%.2f", z) + " se)");
  c.expect(z <= 3.0, "contour and Monte Carlo differ by more than 3 standard errors");
}

void high_clt(Checks& c) {
  ExperimentConfig cfg;
  cfg.n1 = cfg.n2 = 200;
  cfg.beta = 1.0;
  cfg.trials = 2000;
  cfg.master_seed = 11;
  cfg.mode = ExperimentMode::high_fluct;
  const auto g = run_fluctuation_experiment(cfg);
  c.note("gaussian mean " + fmt("%.4f", g.mean) + " var " + fmt("%.4f", g.variance) + " ks " +
         fmt("%.4f", *g.ks_distance));
  c.expect(std::abs(g.mean - (-0.76507)) <= 0.05, "gaussian mean outside -0.76507 +- 0.05");
  c.expect(std::abs(g.variance / 0.14384 - 1.0) <= 0.15, "gaussian variance outside 0.14384 +- 15%");
  c.expect(*g.ks_distance < 0.05, "gaussian KS distance not below 0.05");
  c.expect(g.failures == 0, "gaussian run has rare-event failures");

  cfg.spec = make_distribution(DistributionKind::rademacher);
  const auto r = run_fluctuation_experiment(cfg);
  const double shift = r.mean - g.mean;
  const double v_target = clt_log_constants(1.0, 0.5, 0.5, 1.0).big_v / 4.0;
  c.note("rademacher mean " + fmt("%.4f", r.mean) + " (shift " + fmt("%+.4f", shift) + ") var " +
         fmt("%.5f", r.variance) + " vs " + fmt("%.5f", v_target));
  c.note("second-moment identity puts the shift at " + fmt("%+.3f", -0.125));
  c.expect(std::abs(shift - 0.125) <= 0.05, "rademacher mean shift outside +0.125 +- 0.05");
  c.expect(std::abs(r.variance / v_target - 1.0) <= 0.30, "rademacher variance outside V/4 +- 30%");
  c.expect(r.mean > g.mean, "fourth-moment correction has the wrong sign");
  c.expect(r.failures == 0, "rademacher run has rare-event failures");
}

void low_tw(Checks& c) {
  ExperimentConfig cfg;
  cfg.n1 = cfg.n2 = 500;
  cfg.beta = 2.0;
  cfg.trials = 1000;
  cfg.master_seed = 5;
  cfg.mode = ExperimentMode::edge;
  const auto e = run_edge_experiment(cfg);
  c.note("edge mean " + fmt("%.4f", e.mean) + " var " + fmt("%.4f", e.variance));
  c.expect(e.mean >= -1.35 && e.mean <= -1.05, "edge mean outside [-1.35, -1.05]");
  c.expect(e.variance >= 1.2 && e.variance <= 2.0, "edge variance outside [1.2, 2.0]");

  const auto goe = goe_oracle(200, 2000, 1);
  const double ks = ks_two_sample(e.samples, goe.samples);
  c.note("goe mean " + fmt("%.4f", goe.mean) + " var " + fmt("%.4f", goe.variance) + ", KS " + fmt("%.4f", ks));
  c.expect(ks <= 0.08, "two-sample KS against the GOE oracle above 0.08");

  cfg.mode = ExperimentMode::low_fluct;
  const auto f = run_fluctuation_experiment(cfg);
  const double n = 1000.0;
  const double factor = std::pow(n, 2.0 / 3.0) * edge_coefficient(2.0, 0.5, 0.5) /
                        (tw_scale(2.0, 0.5, 0.5) * edge_scale(500, 500));
  double worst = 0.0;
  if (f.samples.size() != e.samples.size()) {
    c.expect(false, "pipelines returned different sample counts");
    return;
  }
  for (std::size_t i = 0; i < e.samples.size(); ++i) worst = std::max(worst, std::abs(f.samples[i] - factor * e.samples[i]));
  c.note("affine identity max gap " + fmt("%.2e", worst));
  c.expect(worst <= 1e-10, "free-energy statistic is not the rescaled edge statistic to 1e-10");
}

void limits(Checks& c) {
  double worst = 0.0;
  for (auto [r1, r2] : {std::pair{0.5, 0.5}, std::pair{0.7, 0.3}}) {
    for (double beta : {0.5, 1.0, 1.3, 1.6, 2.0, 3.0}) {
      const double grid = auffinger_chen_grid_minimum(beta, r1, r2).value;
      const double gap = std::abs(grid - limiting_free_energy(beta, r1, r2));
      worst = std::max(worst, gap);
      c.expect(gap <= 1e-8, "grid minimum off at beta " + fmt("%g", beta) + ", r1 " + fmt("%g", r1));
    }
    const double bc = critical_beta(r1, r2);
    const double jump =
        std::abs(limiting_free_energy(bc * (1 + 1e-6), r1, r2) - limiting_free_energy(bc * (1 - 1e-6), r1, r2));
    c.expect(jump <= 1e-5, "F not continuous at beta_c for r1 " + fmt("%g", r1));
  }
  c.note("grid vs closed form max gap " + fmt("%.2e", worst));
  double id = 0.0;
  for (double beta : {0.2, 0.4, 0.6, 0.75, 1.0, 1.5}) {
    const double b = 2.0 * std::sqrt(2.0) * beta;
    id = std::max(id, std::abs(limiting_free_energy(b, 0.5, 0.5) - ssk_free_energy(beta)));
    if (beta > 0.5) id = std::max(id, std::abs(tw_scale(b, 0.5, 0.5) - (beta - 0.5)));
  }
  c.note("equal-ratio identities max gap " + fmt("%.2e", id));
  c.expect(id <= 1e-12, "equal-ratio identities off by more than 1e-12");
}

void saddle_machinery(Checks& c) {
  using C = std::complex<double>;
  double res = 0.0, split = 0.0, grad = 0.0;
  for (auto [n1, n2, beta] : {std::tuple{30, 20, 0.8}, std::tuple{100, 100, 1.0}, std::tuple{300, 200, 1.2},
                              std::tuple{200, 200, 2.5}, std::tuple{400, 100, 0.6}}) {
    const auto in = seeded(n1, n2, beta, 9);
    const auto p = solve_gamma(in);
    const auto g = g_eval<double>(in, C(p.gamma1), C(p.gamma2));
    res = std::max(res, p.residual);
    split = std::max(split, std::abs(p.gamma1 - p.gamma2 - in.alpha_n / in.b_n) / p.gamma1);
    grad = std::max(grad, std::max(std::abs(g.d1), std::abs(g.d2)));
  }
  c.note("residual " + fmt("%.1e", res) + ", split " + fmt("%.1e", split) + ", gradient " + fmt("%.1e", grad));
  c.expect(res < 1e-12, "gamma-equation residual not below 1e-12");
  c.expect(split <= 1e-14, "gamma1 - gamma2 differs from alpha/B");
  c.expect(grad < 1e-10, "gradient of G at the saddle not below 1e-10");

  const double zc = z_critical(1.0, 0.5, 0.5);
  double drift = 0.0;
  for (int n = 100; n <= 800; n += 100) {
    const auto p = solve_gamma(seeded(n, n, 1.0, 17));
    const double d = std::abs(4.0 * p.gamma1 * p.gamma2 - zc);
    drift = std::max(drift, d * std::pow(n, 0.9));
    c.expect(d <= 5.0 / std::pow(n, 0.9), "saddle drift too large at n " + std::to_string(n));
  }
  c.note("max n^0.9 drift " + fmt("%.3f", drift));

  double gap = 0.0;
  for (int n : {4, 8}) {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      const auto in = seeded(n, n, 0.5, seed);
      const double d = std::abs(q_saddle_value(in) - contour_q_detail(in).log_value);
      gap = std::max(gap, d * n);
      c.expect(d <= 2.0 / n, "saddle value vs contour beyond 2/n at n " + std::to_string(n));
    }
  }
  c.note("max n |log Q saddle - log Q contour| " + fmt("%.3f", gap));
}

void transforms(Checks& c) {
  double mass = 0.0, st = 0.0, lg = 0.0, tau = 0.0, clt = 0.0, bridge = 0.0;
  for (double r1 : {0.5, 0.6, 0.7, 0.9}) {
    const auto law = mp_law(r1, 1.0 - r1);
    mass = std::max(mass, std::abs(against_density(law, [](double) { return 1.0; }) - 1.0));
    for (double z : {law.d_plus + 0.1, law.d_plus + 1.0, 10.0}) {
      st = std::max(st, std::abs(mp_stieltjes(law, z) - against_density(law, [z](double x) { return 1.0 / (z - x); })));
      lg = std::max(lg, std::abs(mp_log_transform(law, z) -
                                 against_density(law, [z](double x) { return std::log(z - x); })));
    }
  }
  for (auto [beta, r1, w4] : {std::tuple{1.0, 0.5, 3.0}, std::tuple{0.9, 0.7, 1.8}, std::tuple{0.5, 0.6, 1.0},
                              std::tuple{1.2, 0.6, 3.0}}) {
    const double r2 = 1.0 - r1, q = r1 * r2 * std::pow(beta, 4);
    const auto law = mp_law(r1, r2);
    const double zc = z_critical(beta, r1, r2);
    const double hw = 0.25 * law.width(), centre = 0.5 * (law.d_plus + law.d_minus);
    auto phi0 = [&](double y) { return std::log(zc - (hw * y + centre)); };
    tau = std::max(tau, std::abs(chebyshev_tau(phi0, 1) + std::sqrt(r1 * r2) * beta * beta));
    tau = std::max(tau, std::abs(chebyshev_tau(phi0, 2) + 0.5 * q));
    const auto closed = clt_log_constants(beta, r1, r2, w4);
    const auto general = clt_general([zc](double x) { return std::log(zc - x); }, law, w4);
    clt = std::max({clt, std::abs(general.big_m - closed.big_m), std::abs(general.big_v - closed.big_v)});
    const auto rc = regime_constants(beta, r1, r2, w4);
    bridge = std::max(bridge, std::abs(*rc.mu - (-closed.big_m / 2 + 0.5 * std::log1p(-q) - std::numbers::ln2)));
    bridge = std::max(bridge, std::abs(*rc.sigma2 - closed.big_v / 4));
  }
  c.note("mass " + fmt("%.1e", mass) + ", stieltjes " + fmt("%.1e", st) + ", log " + fmt("%.1e", lg) + ", tau " +
         fmt("%.1e", tau) + ", clt " + fmt("%.1e", clt) + ", bridge " + fmt("%.1e", bridge));
  c.expect(mass <= 1e-10, "density mass off by more than 1e-10");
  c.expect(st <= 1e-8, "stieltjes transform vs quadrature beyond 1e-8");
  c.expect(lg <= 1e-8, "log transform vs quadrature beyond 1e-8");
  c.expect(tau <= 1e-8, "chebyshev coefficients vs closed forms beyond 1e-8");
  c.expect(clt <= 1e-6, "general CLT constants vs closed forms beyond 1e-6");
  c.expect(bridge <= 1e-12, "mu / sigma^2 bridge beyond 1e-12");
}

void rigidity(Checks& c) {
  const auto gaussian = make_distribution(DistributionKind::gaussian);
  const auto law = mp_law(0.5, 0.5);
  const auto g = classical_locations(law, 1000);
  int total = 0, bad_seeds = 0;
  double worst = 0.0;
  Eigen::Index worst_k = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto s = gram_eigenvalues(sample_disorder(gaussian, 1000, 1000, seed));
    const auto r = rigidity_report(s, g, 0.3);
    total += r.violations;
    bad_seeds += r.violations > 0;
    if (r.max_ratio > worst) {
      worst = r.max_ratio;
      worst_k = r.worst_index;
    }
  }
  c.note(std::to_string(total) + " violations over " + std::to_string(bad_seeds) + "/20 seeds, worst ratio " +
         fmt("%.3f", worst) + " at k " + std::to_string(worst_k));
  c.expect(total == 0, "rigidity violations present");
}

}  // namespace

int main() {
  criterion(1, "contour quadrature, analytic case", 1.0, contour_oracle);
  criterion(2, "contour vs sphere Monte Carlo, (3,2) beta 0.5", 120.0, brute_force);
  criterion(3, "high-temperature CLT and fourth-moment shift", 600.0, high_clt);
  criterion(4, "low-temperature edge scaling", 1200.0, low_tw);
  criterion(5, "limiting free energy cross-checks", 60.0, limits);
  criterion(6, "saddle machinery", 60.0, saddle_machinery);
  criterion(7, "transform suite", 30.0, transforms);
  criterion(8, "rigidity, n = 1000, 20 seeds", 300.0, rigidity);
  std::printf("%d of 8 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
