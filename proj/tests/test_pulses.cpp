#include <doctest.h>

#include <cmath>

#include "stirap/model.hpp"
#include "stirap/pulses.hpp"
#include "stirap/spectral.hpp"

using namespace stirap;

namespace {

PulseSchedule sample_schedule() {
  PulseSchedule s;
  s.Omega0 = 0.5;
  s.t_c = 2.0;
  s.T = 1.5;
  s.kappa_delta = 14.05;
  s.h_delta = 2.0;
  s.tau = 4.0;
  s.tau_ch = 0.8;
  return s;
}

}  // namespace

TEST_CASE("omega_p: Gaussian peak, unit-width point, and tail") {
  PulseSchedule s = sample_schedule();
  CHECK(omega_p(s.t_c, s) == doctest::Approx(s.Omega0).epsilon(1e-15));
  CHECK(omega_p(s.t_c + s.T, s) ==
        doctest::Approx(s.Omega0 * std::exp(-1.0)).epsilon(1e-14));
  CHECK(omega_p(s.t_c - s.T, s) ==
        doctest::Approx(s.Omega0 * std::exp(-1.0)).epsilon(1e-14));
  CHECK(omega_p(s.t_c + 10.0 * s.T, s) < 1e-40 * s.Omega0);
  CHECK(omega_p(s.t_c + 10.0 * s.T, s) > 0.0);
}

TEST_CASE("omega_p: maximum over the domain sits exactly at t_c") {
  PulseSchedule s = sample_schedule();
  const double peak = omega_p(s.t_c, s);
  for (double t = -s.t_final(); t <= s.t_final(); t += 0.01) {
    CHECK(omega_p(t, s) <= peak);
  }
}

TEST_CASE("delta_s: odd about zero with saturating asymptotes") {
  PulseSchedule s = sample_schedule();
  CHECK(delta_s(0.0, s) == doctest::Approx(0.0).epsilon(1e-15));

  const double height = s.h_delta * s.Omega0;
  CHECK(delta_s(-1e4, s) == doctest::Approx(+height).epsilon(1e-12));
  CHECK(delta_s(+1e4, s) == doctest::Approx(-height).epsilon(1e-12));

  // Monotone nonincreasing across the sweep.
  double prev = delta_s(-s.t_final(), s);
  for (double t = -s.t_final(); t <= s.t_final(); t += 0.005) {
    const double cur = delta_s(t, s);
    CHECK(cur <= prev + 1e-14);
    prev = cur;
  }
}

TEST_CASE("detunings: ratio identities and the zero point") {
  PulseSchedule s = sample_schedule();

  Detunings at0 = detunings(0.0, s);
  CHECK(at0.delta_c == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(at0.delta_a == doctest::Approx(0.0).epsilon(1e-15));

  for (double t : {-7.0, -2.3, 1.7, 5.0, 9.9}) {
    const double ds = delta_s(t, s);
    Detunings d = detunings(t, s);
    CHECK(d.delta_c - d.delta_a == doctest::Approx(ds).epsilon(1e-12));
    CHECK(d.delta_c == doctest::Approx(s.kappa_delta * ds).epsilon(1e-14));
    if (d.delta_a != 0.0) {
      CHECK(d.delta_c / d.delta_a ==
            doctest::Approx(s.kappa_delta / (s.kappa_delta - 1.0)).epsilon(1e-12));
    }
  }
}

TEST_CASE("detunings: published ratio at delta_s = -1") {
  // h_delta * Omega0 = 1 makes the saturated sweep value exactly -1.
  PulseSchedule s = sample_schedule();
  s.h_delta = 2.0;
  s.Omega0 = 0.5;
  const double t_sat = s.tau + 25.0 * s.tau_ch;  // tanh saturated to ~1e-17
  REQUIRE(delta_s(t_sat, s) == doctest::Approx(-1.0).epsilon(1e-12));
  Detunings d = detunings(t_sat, s);
  CHECK(d.delta_c == doctest::Approx(-14.05).epsilon(1e-12));
  CHECK(d.delta_a == doctest::Approx(-13.05).epsilon(1e-12));
}

TEST_CASE("PulseSchedule validation and derived quantities") {
  PulseSchedule s = sample_schedule();
  CHECK_NOTHROW(s.validate());
  CHECK(s.g_ca() == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(s.t_final() == doctest::Approx(4.0 + 5.0 * 0.8).epsilon(1e-15));

  PulseSchedule bad = s;
  bad.Omega0 = 0.0;
  CHECK_THROWS_AS(bad.validate(), NonPositiveAmplitude);
  bad = s;
  bad.T = -1.0;
  CHECK_THROWS_AS(bad.validate(), NonPositiveAmplitude);
  bad = s;
  bad.tau_ch = 0.0;
  CHECK_THROWS_AS(bad.validate(), NonPositiveAmplitude);
}

TEST_CASE("TruncationWindow validation") {
  TruncationWindow w;
  w.t_start = 50.0;
  w.t_end = 90.0;
  CHECK_NOTHROW(w.validate());
  CHECK(w.width() == doctest::Approx(40.0));
  CHECK(w.n_cycles == 10);

  w.t_end = 50.0;
  CHECK_THROWS_AS(w.validate(), ConfigError);
  w.t_end = 90.0;
  w.n_cycles = 0;
  CHECK_THROWS_AS(w.validate(), ConfigError);
}

TEST_CASE("default_window encloses the crossing for the strong-drive schedule") {
  PulseSchedule s = canonical_schedule(0.9);
  AdiabaticSpectrum spec = find_crossings_and_gap(s);
  TruncationWindow w = default_window(s, spec.gap);

  CHECK(w.t_start < 68.03);
  CHECK(w.t_end > 68.03);
  CHECK(w.t_start >= 50.0);
  CHECK(w.t_end <= 90.0);
  CHECK(w.n_cycles == 10);
}

TEST_CASE("default_window scales to the weak-drive published window") {
  PulseSchedule s = canonical_schedule(0.02);
  AdiabaticSpectrum spec = find_crossings_and_gap(s);
  TruncationWindow w = default_window(s, spec.gap);

  CHECK(w.t_start < 3061.0);
  CHECK(w.t_end > 3061.0);
  CHECK(w.t_start >= 3000.0);
  CHECK(w.t_end <= 3180.0);
}

TEST_CASE("default_window requires a located crossing") {
  PulseSchedule s = sample_schedule();
  GapLocation none;  // found == false
  CHECK_THROWS_AS(default_window(s, none), NoGapFound);
}

TEST_CASE("default_window clips to the schedule domain") {
  PulseSchedule s = sample_schedule();
  GapLocation edge;
  edge.found = true;
  edge.t = s.t_final() - 0.01;
  edge.t_min = edge.t;
  edge.gap = 0.1;
  TruncationWindow w = default_window(s, edge);
  CHECK(w.t_end <= s.t_final() + 1e-12);
  CHECK(w.t_start < w.t_end);
}
