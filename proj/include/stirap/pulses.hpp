#pragma once

#include "stirap/errors.hpp"

namespace stirap {

// Shape parameters of the pump/detuning modulation. Times are in units of
// 1/omega_b, amplitudes in units of omega_b. The peak amplitude Omega0 also
// fixes the static cavity-cavity coupling through g_ca = Omega0 / 2
// (equivalently, the Stokes amplitude is Omega_s = Omega0).
struct PulseSchedule {
  double Omega0 = 0.0;       // peak pump amplitude
  double t_c = 0.0;          // pump Gaussian center
  double T = 1.0;            // pump Gaussian width
  double kappa_delta = 0.0;  // detuning ratio delta_c / delta_s
  double h_delta = 0.0;      // detuning height in units of Omega0
  double tau = 0.0;          // tanh sweep center offset
  double tau_ch = 1.0;       // tanh sweep timescale

  // Static cavity-cavity coupling implied by the schedule.
  double g_ca() const { return 0.5 * Omega0; }
  // Edge of the symmetric schedule domain t in [-t_final, +t_final]; the
  // detuning sweep has fully saturated past tau + 5 tau_ch.
  double t_final() const { return tau + 5.0 * tau_ch; }

  void validate() const {
    if (!(Omega0 > 0.0)) throw NonPositiveAmplitude("Omega0 must be > 0");
    if (!(T > 0.0)) throw NonPositiveAmplitude("pump width T must be > 0");
    if (!(tau_ch > 0.0)) throw NonPositiveAmplitude("sweep timescale tau_ch must be > 0");
  }
};

// Truncated sub-pulse in absolute schedule times, iterated n_cycles times.
struct TruncationWindow {
  double t_start = 0.0;
  double t_end = 0.0;
  int n_cycles = 10;

  double width() const { return t_end - t_start; }
  void validate() const {
    if (!(t_start < t_end)) throw ConfigError("window requires t_start < t_end");
    if (n_cycles < 1) throw ConfigError("window requires n_cycles >= 1");
  }
};

// Location and size of an avoided crossing found by the spectral module.
struct GapLocation {
  double t = 0.0;      // zero crossing of the Stokes eigenvalue
  double t_min = 0.0;  // time of the minimum branch separation nearby
  double gap = 0.0;    // minimum eigenvalue separation
  bool found = false;
};

// Pump coupling Omega_p(t); the instantaneous optomechanical coupling is
// G_cb(t) = omega_p(t) / 2.
double omega_p(double t, const PulseSchedule& s);

// Detuning sweep delta_s(t); monotone nonincreasing, odd about t = 0, with
// asymptotes +- h_delta * Omega0.
double delta_s(double t, const PulseSchedule& s);

struct Detunings {
  double delta_c = 0.0;
  double delta_a = 0.0;
};

// delta_c = kappa_delta * delta_s, delta_a = (kappa_delta - 1) * delta_s.
Detunings detunings(double t, const PulseSchedule& s);

// Window enclosing the located avoided crossing, clipped to the schedule
// domain; n_cycles defaults to 10. Throws NoGapFound when the locator did not
// find a crossing.
TruncationWindow default_window(const PulseSchedule& s, const GapLocation& gap);

}  // namespace stirap
