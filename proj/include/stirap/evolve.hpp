#pragma once

#include <utility>
#include <vector>

#include "stirap/model.hpp"
#include "stirap/moments.hpp"
#include "stirap/ode.hpp"
#include "stirap/pulses.hpp"

namespace stirap {

struct IntegrateOptions {
  OdeOptions ode;  // rtol 1e-8, atol 1e-10 by default
  bool counter_rotating = true;
  int n_samples = 400;
  // Covariance physicality margin (scaled by max(1, |m|_inf)) below which
  // integration aborts with UnphysicalState; checked at sample points (a
  // cheap occupancy check runs every accepted step).
  double physicality_tol = 1e-4;
  bool check_physicality = true;
  // Evolve with the pump forced off and the detunings frozen at the segment
  // start; used for hold segments between cooling cycles.
  bool pump_off = false;
};

struct Trajectory {
  std::vector<double> t;              // global time of each sample
  std::vector<double> schedule_time;  // modulation clock (equal to t for
                                      // single runs; wraps across cycles)
  std::vector<MomentState> states;    // states[i].t is the global time
  std::vector<Occupancies> occ;
  PulseSchedule schedule;
  SystemParams params;
  bool counter_rotating = true;
  OdeStats stats;
  double min_Nb = 0.0;    // minimum <b+b> over every accepted step
  double t_min_Nb = 0.0;  // global time of that minimum
};

// Integrates the moment system over schedule time [t0, t1]. The
// counter-rotating phases are evaluated in schedule time at every stage; the
// default maximum step is pi/(20 omega_b) whenever they are active so the
// 2 omega_b oscillation stays resolved.
Trajectory integrate(const MomentState& initial, const PulseSchedule& s,
                     const SystemParams& p, double t0, double t1,
                     const IntegrateOptions& opts = {});

struct CoolingReport {
  double initial_Nb = 0.0;
  double N_b_min = 0.0;  // global minimum of <b+b> over the whole run
  double t_min = 0.0;    // global time of the minimum
  std::vector<double> cycle_end_Nb;
  double final_Nb = 0.0;
  int n_cycles = 0;
  OdeStats stats;  // accumulated over all cycles
};

// Repeats the truncated sub-pulse w.n_cycles times. Cycles are contiguous in
// the state: the moments at t_end seed the next cycle while the modulation
// clock resets to t_start, so every cycle applies the identical generator.
// Global time advances by (window width + hold_time) per cycle. A positive
// hold_time inserts a pump-off segment (detunings frozen at the window end)
// between cycles.
std::pair<Trajectory, CoolingReport> iterate_cooling(
    const MomentState& initial, const PulseSchedule& s,
    const TruncationWindow& w, const SystemParams& p,
    const IntegrateOptions& opts = {}, double hold_time = 0.0);

}  // namespace stirap
