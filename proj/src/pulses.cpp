#include "stirap/pulses.hpp"

#include <algorithm>
#include <cmath>

namespace stirap {

double omega_p(double t, const PulseSchedule& s) {
  const double u = (t - s.t_c) / s.T;
  return s.Omega0 * std::exp(-u * u);
}

double delta_s(double t, const PulseSchedule& s) {
  return -s.h_delta * 0.5 * s.Omega0 *
         (std::tanh((t - s.tau) / s.tau_ch) + std::tanh((t + s.tau) / s.tau_ch));
}

Detunings detunings(double t, const PulseSchedule& s) {
  const double ds = delta_s(t, s);
  return {s.kappa_delta * ds, (s.kappa_delta - 1.0) * ds};
}

TruncationWindow default_window(const PulseSchedule& s, const GapLocation& gap) {
  if (!gap.found) {
    throw NoGapFound("no avoided crossing available to center a window on");
  }
  // Half-width: the pump support where omega_p > 0.1 * Omega0 would give
  // sqrt(ln 10) * T, but for the canonical schedule family that extends well
  // past the region that actually carries the transfer; cap it at a fixed
  // number of coupling periods around the crossing. The window is centered
  // on the Stokes zero crossing (gap.t), which tracks the pump center.
  const double half =
      std::min(std::sqrt(std::log(10.0)) * s.T, 0.6 / s.Omega0);
  TruncationWindow w;
  w.t_start = std::max(gap.t - half, -s.t_final());
  w.t_end = std::min(gap.t + half, s.t_final());
  w.n_cycles = 10;
  w.validate();
  return w;
}

}  // namespace stirap
