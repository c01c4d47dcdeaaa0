#include <doctest.h>

#include <cmath>
#include <random>

#include "stirap/model.hpp"

using namespace stirap;

TEST_CASE("mean_fields: decoupled cavity gives eta = eps_p / kappa_c") {
  SystemParams p;
  p.kappa_a = 1.0;
  p.kappa_c = 0.5;
  p.kappa_b = 0.01;
  p.g_ca = 0.0;

  DriveParams d;
  d.eps_p = 1.0;
  d.Delta_a = 0.3;
  d.Delta_c = 0.0;
  d.g_cb = 1e-4;

  MeanFields f = mean_fields(d, p);
  CHECK(f.eta.real() == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(std::abs(f.eta.imag()) < 1e-12);
}

TEST_CASE("mean_fields: lossless resonant auxiliary cavity blocks the drive") {
  SystemParams p;
  p.kappa_a = 0.0;
  p.kappa_c = 0.5;
  p.kappa_b = 0.01;
  p.g_ca = 0.45;

  DriveParams d;
  d.eps_p = 1.0;
  d.Delta_a = 0.0;
  d.Delta_c = 1.0;
  d.g_cb = 1e-4;

  MeanFields f = mean_fields(d, p);
  CHECK(std::abs(f.eta) < 1e-14);
}

TEST_CASE("mean_fields: generic inputs satisfy the steady-state equations") {
  SystemParams p;
  p.kappa_a = 2.0;
  p.kappa_c = 0.5;
  p.kappa_b = 0.01;
  p.g_ca = 0.45;

  DriveParams d;
  d.eps_p = 1.0;
  d.Delta_a = 0.2;
  d.Delta_c = 1.0;
  d.g_cb = 1e-4;

  MeanFields f = mean_fields(d, p);
  CHECK(steady_state_residual(f, d, p).norm() < 1e-12);
}

TEST_CASE("mean_fields: residual stays below 1e-10 over 1000 random draws") {
  std::mt19937 rng(20260814);
  std::uniform_real_distribution<double> mag(0.05, 3.0);
  std::uniform_real_distribution<double> det(-2.0, 2.0);

  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    SystemParams p;
    p.kappa_a = mag(rng);
    p.kappa_c = mag(rng);
    p.kappa_b = 0.01 * mag(rng);
    p.g_ca = 0.5 * mag(rng);

    DriveParams d;
    d.eps_p = Complex(det(rng), det(rng));
    d.Delta_a = det(rng);
    d.Delta_c = det(rng);
    d.g_cb = 1e-3 * mag(rng);

    MeanFields f = mean_fields(d, p);
    worst = std::max(worst, steady_state_residual(f, d, p).norm());
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("mean_fields: exact interference zero raises SingularDenominator") {
  // g_ca^2 + (i Delta_c)(i Delta_a) = 1 - 1 = 0 with all kappa = 0.
  SystemParams p;
  p.kappa_a = 0.0;
  p.kappa_c = 0.0;
  p.kappa_b = 0.0;
  p.g_ca = 1.0;

  DriveParams d;
  d.eps_p = 1.0;
  d.Delta_a = 1.0;
  d.Delta_c = 1.0;
  d.g_cb = 1e-4;

  CHECK_THROWS_AS(mean_fields(d, p), SingularDenominator);
}

TEST_CASE("linearized_coupling: G_cb = eta * g_cb") {
  SystemParams p;
  p.kappa_a = 1.0;
  p.kappa_c = 0.5;
  p.kappa_b = 0.01;
  p.g_ca = 0.0;

  DriveParams d;
  d.eps_p = 1.0;
  d.Delta_c = 0.0;
  d.Delta_a = 0.3;

  SUBCASE("zero bare coupling gives zero") {
    d.g_cb = 0.0;
    CHECK(std::abs(linearized_coupling(d, p)) == 0.0);
  }
  SUBCASE("real eta = 2 times g_cb = 0.05 gives 0.1") {
    d.g_cb = 0.05;
    Complex G = linearized_coupling(d, p);
    CHECK(G.real() == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(std::abs(G.imag()) < 1e-13);
  }
  SUBCASE("modulus identity |G| = |eta| |g_cb|") {
    d.Delta_a = -0.7;
    d.Delta_c = 0.4;
    d.eps_p = Complex(0.3, -1.1);
    d.g_cb = 3.7e-4;
    p.g_ca = 0.45;
    Complex G = linearized_coupling(d, p);
    MeanFields f = mean_fields(d, p);
    CHECK(std::abs(G) ==
          doctest::Approx(std::abs(f.eta) * d.g_cb).epsilon(1e-14));
  }
}

TEST_CASE("canonical_schedule reproduces the published rows within 0.1%") {
  struct Row {
    double x, tau_ch, tau, T, t_c;
  };
  // (omega_b tau_ch, omega_b tau, omega_b T, omega_b t_c) per drive strength.
  const Row rows[] = {
      {0.1, 164.99, 1101.69, 108.76, 612.26},
      {0.3, 54.99, 367.23, 36.25, 204.08},
      {0.9, 18.33, 122.41, 12.08, 68.03},
  };
  for (const Row& r : rows) {
    PulseSchedule s = canonical_schedule(r.x);
    CHECK(s.tau_ch == doctest::Approx(r.tau_ch).epsilon(1e-3));
    CHECK(s.tau == doctest::Approx(r.tau).epsilon(1e-3));
    CHECK(s.T == doctest::Approx(r.T).epsilon(1e-3));
    CHECK(s.t_c == doctest::Approx(r.t_c).epsilon(1e-3));
    CHECK(s.Omega0 == r.x);
    CHECK(s.kappa_delta == doctest::Approx(14.05).epsilon(1e-12));
    CHECK(s.h_delta == doctest::Approx(13.94).epsilon(1e-12));
  }
}

TEST_CASE("canonical_schedule time fields scale exactly as 1/Omega0") {
  const double xs[] = {0.02, 0.1, 0.37, 0.9, 1.5, 7.0};
  PulseSchedule ref = canonical_schedule(1.0);
  for (double x : xs) {
    PulseSchedule s = canonical_schedule(x);
    CHECK(s.tau_ch * x == doctest::Approx(ref.tau_ch).epsilon(1e-12));
    CHECK(s.tau * x == doctest::Approx(ref.tau).epsilon(1e-12));
    CHECK(s.T * x == doctest::Approx(ref.T).epsilon(1e-12));
    CHECK(s.t_c * x == doctest::Approx(ref.t_c).epsilon(1e-12));
    CHECK(s.kappa_delta == ref.kappa_delta);
    CHECK(s.h_delta == ref.h_delta);
  }
}

TEST_CASE("canonical_schedule rejects nonpositive amplitude") {
  CHECK_THROWS_AS(canonical_schedule(0.0), NonPositiveAmplitude);
  CHECK_THROWS_AS(canonical_schedule(-0.5), NonPositiveAmplitude);
}

TEST_CASE("SystemParams Q_b round trip and validation") {
  SystemParams p;
  p.set_Q_b(1e7);
  CHECK(p.kappa_b == doctest::Approx(1e-7).epsilon(1e-15));
  CHECK(p.Q_b() == doctest::Approx(1e7).epsilon(1e-15));

  SystemParams bad;
  bad.kappa_c = -0.1;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad.kappa_c = 0.1;
  bad.nbar_b = -1.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}
