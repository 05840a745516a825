#include <doctest.h>

#include <cmath>
#include <numbers>

#include "bssk/errors.hpp"
#include "bssk/theory.hpp"

using namespace bssk;

TEST_CASE("regime constants, high temperature") {
  const auto rc = regime_constants(1.0, 0.5, 0.5, 3.0);
  CHECK(rc.regime == Regime::high);
  CHECK(rc.beta_c == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(*rc.z_c == doctest::Approx(4.5).epsilon(1e-15));
  CHECK(rc.f_limit == doctest::Approx(0.125).epsilon(1e-15));
  CHECK(*rc.mu == doctest::Approx(0.25 * std::log(0.75) - std::numbers::ln2).epsilon(1e-14));
  CHECK(std::abs(*rc.mu - (-0.76506774)) < 1e-7);
  CHECK(*rc.sigma2 == doctest::Approx(0.14384104).epsilon(1e-8));
  CHECK_FALSE(rc.a_scale);
}

TEST_CASE("regime constants, low temperature") {
  const auto rc = regime_constants(2.0, 0.5, 0.5, 1.0);
  CHECK(rc.regime == Regime::low);
  CHECK(rc.s_param == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(*rc.a_scale == doctest::Approx((std::sqrt(2.0) - 1.0) / 2.0).epsilon(1e-14));
  CHECK(rc.f_limit == doctest::Approx(0.49092676).epsilon(1e-8));
  CHECK_FALSE(rc.mu);
  CHECK_FALSE(rc.z_c);
}

TEST_CASE("critical band") {
  const double bc = critical_beta(0.7, 0.3);
  const auto rc = regime_constants(bc * (1 + 1e-13), 0.7, 0.3, 3.0);
  CHECK(rc.regime == Regime::critical);
  CHECK_FALSE(rc.mu);
  CHECK_FALSE(rc.a_scale);
  CHECK_THROWS_AS(auffinger_chen_value(bc, 0.7, 0.3), RegimeError);
}

TEST_CASE("symmetry in the ratios") {
  for (double beta : {0.6, 1.1, 1.9, 3.0}) {
    const auto a = regime_constants(beta, 0.7, 0.3, 1.8);
    const auto b = regime_constants(beta, 0.3, 0.7, 1.8);
    CHECK(a.regime == b.regime);
    CHECK(a.f_limit == b.f_limit);
    CHECK(a.s_param == b.s_param);
    CHECK(a.mu == b.mu);
    CHECK(a.sigma2 == b.sigma2);
    CHECK(a.a_scale == b.a_scale);
    CHECK(a.z_c == b.z_c);
  }
}

TEST_CASE("auffinger-chen minimization") {
  auto v = auffinger_chen_value(1.0, 0.5, 0.5);
  CHECK(v.a == 0.0);
  CHECK(v.b == 0.0);
  CHECK(v.value == doctest::Approx(0.125).epsilon(1e-15));
  for (auto [r1, r2] : {std::pair{0.5, 0.5}, std::pair{0.7, 0.3}}) {
    for (double beta : {0.5, 1.0, 1.3, 1.6, 2.0, 3.0}) {
      const auto closed = auffinger_chen_value(beta, r1, r2);
      CHECK(std::abs(closed.value - regime_constants(beta, r1, r2, 3.0).f_limit) <= 1e-10);
      CHECK(auffinger_chen_objective(0, 0, beta, r1, r2) == doctest::Approx(r1 * r2 * beta * beta / 2));
      const auto grid = auffinger_chen_grid_minimum(beta, r1, r2);
      CHECK(std::abs(grid.value - closed.value) <= 1e-9);
      CHECK(std::abs(grid.a - closed.a) <= 1e-5);
      CHECK(std::abs(grid.b - closed.b) <= 1e-5);
    }
  }
}

TEST_CASE("single-species free energy") {
  CHECK(ssk_free_energy(0.4) == doctest::Approx(0.16).epsilon(1e-15));
  CHECK(ssk_free_energy(1.0 / std::sqrt(2.0)) == doctest::Approx(0.49092676).epsilon(1e-8));
  CHECK(std::abs(ssk_free_energy(0.5 - 1e-8) - ssk_free_energy(0.5 + 1e-8)) < 1e-7);
  CHECK_THROWS_AS(ssk_free_energy(0.5), RegimeError);
}

TEST_CASE("special-case identities at equal ratios") {
  for (double beta : {0.6, 0.75, 1.0, 1.5}) {
    const double b = 2.0 * std::sqrt(2.0) * beta;
    CHECK(std::abs(limiting_free_energy(b, 0.5, 0.5) - ssk_free_energy(beta)) <= 1e-12);
    CHECK(std::abs(tw_scale(b, 0.5, 0.5) - (beta - 0.5)) <= 1e-12);
  }
}

TEST_CASE("continuity at the critical point") {
  for (double r1 : {0.5, 0.55, 0.62, 0.78, 0.93}) {
    const double r2 = 1.0 - r1, bc = critical_beta(r1, r2);
    const double below = limiting_free_energy(bc * (1 - 1e-6), r1, r2);
    const double above = limiting_free_energy(bc * (1 + 1e-6), r1, r2);
    CHECK(std::abs(below - above) < 1e-5);
  }
}

TEST_CASE("small-beta variance") {
  for (double w4 : {1.0, 1.8, 3.0}) {
    const double beta = 0.01;
    const double q = 0.21 * std::pow(beta, 4);
    const auto rc = regime_constants(beta, 0.7, 0.3, w4);
    CHECK(*rc.sigma2 > 0.0);
    const double series = q * (0.5 + (w4 - 3.0) / 4.0) + q * q / 4.0 + q * q * q / 6.0;
    CHECK(*rc.sigma2 == doctest::Approx(series).epsilon(1e-5));
  }
}

TEST_CASE("critical B") {
  const auto half = mp_law(0.5, 0.5);
  CHECK(b_critical(0.0, half) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::sqrt(0.5) * b_critical(0.0, half) / 0.5 == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  CHECK(b_critical(0.0, half) == doctest::Approx(std::sqrt(half.d_plus) * mp_stieltjes(half, half.d_plus)));
  const double r1 = 0.64, r2 = 0.36;
  const auto law = mp_law(r1, r2);
  const double bc = b_critical((r1 - r2) / (2 * r2), law);
  CHECK(std::abs(std::sqrt(r2) * bc / r1 - critical_beta(r1, r2)) <= 1e-10);
}

TEST_CASE("log-test-function clt constants") {
  auto c = clt_log_constants(1.0, 0.5, 0.5, 3.0);
  CHECK(c.big_m == doctest::Approx(0.5 * std::log(0.75)).epsilon(1e-14));
  CHECK(c.big_v == doctest::Approx(0.57536414).epsilon(1e-8));
  CHECK(c.tau1 == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(c.tau2 == doctest::Approx(-0.125).epsilon(1e-15));
  c = clt_log_constants(1.0, 0.5, 0.5, 1.0);
  CHECK(c.big_m == doctest::Approx(-0.39384104).epsilon(1e-8));
  CHECK(c.big_v == doctest::Approx(0.07536414).epsilon(1e-7));
  CHECK_THROWS_AS(clt_log_constants(2.0, 0.5, 0.5, 3.0), RegimeError);

  for (double w4 : {1.0, 1.8, 3.0}) {
    for (auto [beta, r1] : {std::pair{1.0, 0.5}, std::pair{0.9, 0.7}, std::pair{0.3, 0.6}}) {
      const double r2 = 1.0 - r1, q = r1 * r2 * std::pow(beta, 4);
      const auto k = clt_log_constants(beta, r1, r2, w4);
      const auto rc = regime_constants(beta, r1, r2, w4);
      CHECK(std::abs(*rc.mu - (-k.big_m / 2 + 0.5 * std::log1p(-q) - std::numbers::ln2)) <= 1e-12);
      CHECK(std::abs(*rc.sigma2 - k.big_v / 4) <= 1e-12);
    }
  }
}

TEST_CASE("chebyshev coefficients") {
  CHECK(chebyshev_tau([](double) { return 1.0; }, 0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(chebyshev_tau([](double) { return 1.0; }, 1)) < 1e-14);
  CHECK(std::abs(chebyshev_tau([](double) { return 1.0; }, 2)) < 1e-14);
  CHECK(std::abs(chebyshev_tau([](double x) { return x; }, 0)) < 1e-14);
  CHECK(chebyshev_tau([](double x) { return x; }, 1) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(chebyshev_tau([](double x) { return x; }, 2)) < 1e-14);

  const auto k = clt_log_constants(1.0, 0.5, 0.5, 3.0);
  auto phi0 = [](double y) { return std::log(2.5 - y); };
  CHECK(std::abs(chebyshev_tau(phi0, 1) - k.tau1) <= 1e-8);
  CHECK(std::abs(chebyshev_tau(phi0, 2) - k.tau2) <= 1e-8);
  CHECK_THROWS_AS(chebyshev_tau([](double y) { return std::log(1.0 - y); }, 1), EvaluationError);
  CHECK_THROWS_AS(chebyshev_tau(phi0, -1), ParameterError);
}

TEST_CASE("general clt constants") {
  for (auto [beta, r1, w4] : {std::tuple{1.0, 0.5, 3.0}, std::tuple{0.9, 0.7, 1.8}, std::tuple{0.5, 0.6, 1.0}}) {
    const double r2 = 1.0 - r1;
    const double zc = z_critical(beta, r1, r2);
    const auto general = clt_general([zc](double x) { return std::log(zc - x); }, mp_law(r1, r2), w4);
    const auto closed = clt_log_constants(beta, r1, r2, w4);
    CHECK(std::abs(general.big_m - closed.big_m) <= 1e-6);
    CHECK(std::abs(general.big_v - closed.big_v) <= 1e-6);
    CHECK(std::abs(general.tau0 - closed.tau0) <= 1e-8);
    CHECK(std::abs(general.tau1 - closed.tau1) <= 1e-8);
    CHECK(std::abs(general.tau2 - closed.tau2) <= 1e-8);
  }
  const auto law = mp_law(0.7, 0.3);
  const auto flat = clt_general([](double) { return 3.0; }, law, 1.0);
  CHECK(std::abs(flat.big_m) < 1e-14);
  CHECK(std::abs(flat.big_v) < 1e-14);
  const double centre = 0.5 * (law.d_plus + law.d_minus);
  const auto even = clt_general([centre](double x) { return (x - centre) * (x - centre); }, law, 1.0);
  CHECK(std::abs(even.tau1) < 1e-12);
  CHECK(even.big_v == doctest::Approx(even.v_goe).epsilon(1e-12));
  CHECK(even.big_v >= 0.0);
  CHECK_THROWS_AS(clt_general([&](double x) { return std::log(law.d_plus - x); }, law, 3.0), EvaluationError);
}
