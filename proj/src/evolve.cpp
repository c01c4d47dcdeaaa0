#include "stirap/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "stirap/errors.hpp"

namespace stirap {

namespace {

OdeOptions effective_ode_options(const IntegrateOptions& opts,
                                 const SystemParams& p) {
  OdeOptions ode = opts.ode;
  if (!(ode.rtol > 0.0) || !(ode.atol > 0.0)) {
    throw ConfigError("integration tolerances must be positive");
  }
  const bool cr_active = opts.counter_rotating && !opts.pump_off;
  if (cr_active && !std::isfinite(ode.max_step)) {
    ode.max_step = M_PI / (20.0 * p.omega_b);
  }
  return ode;
}

}  // namespace

Trajectory integrate(const MomentState& initial, const PulseSchedule& s,
                     const SystemParams& p, double t0, double t1,
                     const IntegrateOptions& opts) {
  if (!(t1 > t0)) throw ConfigError("integration span must be nonempty");
  s.validate();
  p.validate();
  const OdeOptions ode = effective_ode_options(opts, p);
  const int n_samples = std::max(opts.n_samples, 2);

  Trajectory traj;
  traj.schedule = s;
  traj.params = p;
  traj.counter_rotating = opts.counter_rotating;
  traj.min_Nb = initial.m[MomentState::kNb].real();
  traj.t_min_Nb = t0;
  traj.t.reserve(static_cast<size_t>(n_samples));
  traj.states.reserve(static_cast<size_t>(n_samples));
  traj.occ.reserve(static_cast<size_t>(n_samples));

  // Hold segments freeze the modulation at the segment start and silence the
  // pump; everything else follows the schedule clock, including the
  // counter-rotating phases.
  GeneratorSnapshot frozen;
  if (opts.pump_off) {
    GeneratorCoeffs c = schedule_coeffs(t0, s, p, false);
    c.G_cb = 0.0;
    frozen = build_generator(c, p);
  }
  auto rhs = [&](double t, const Vector12c& m, Vector12c& dm) {
    if (opts.pump_off) {
      dm = frozen.M * m + frozen.N * m.conjugate() + frozen.v;
    } else {
      dm = moment_rhs(t, m, s, p, opts.counter_rotating);
    }
  };

  auto observer = [&](double t, const Vector12c& m, bool is_sample) {
    const double nb = m[MomentState::kNb].real();
    if (nb < traj.min_Nb) {
      traj.min_Nb = nb;
      traj.t_min_Nb = t;
    }
    // Cheap per-step guard; the covariance margin is checked at samples.
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    if (!std::isfinite(nb) ||
        std::abs(m[MomentState::kNb].imag()) > opts.physicality_tol * scale) {
      throw UnphysicalState("<b+b> left the real axis at t = " +
                            std::to_string(t));
    }
    if (!is_sample) return;
    MomentState st;
    st.m = m;
    st.t = t;
    if (opts.check_physicality) {
      const double margin = physicality_margin(st);
      if (margin < -opts.physicality_tol * scale) {
        throw UnphysicalState("covariance physicality margin " +
                              std::to_string(margin) + " at t = " +
                              std::to_string(t));
      }
    }
    traj.occ.push_back(occupancies(st));
    traj.t.push_back(t);
    traj.schedule_time.push_back(t);
    traj.states.push_back(std::move(st));
  };

  traj.stats = integrate_adaptive(rhs, initial.m, t0, t1, ode,
                                  linspace(t0, t1, n_samples), observer);
  return traj;
}

std::pair<Trajectory, CoolingReport> iterate_cooling(
    const MomentState& initial, const PulseSchedule& s,
    const TruncationWindow& w, const SystemParams& p,
    const IntegrateOptions& opts, double hold_time) {
  w.validate();
  if (hold_time < 0.0) throw ConfigError("hold_time must be nonnegative");

  Trajectory traj;
  traj.schedule = s;
  traj.params = p;
  traj.counter_rotating = opts.counter_rotating;
  traj.min_Nb = initial.m[MomentState::kNb].real();
  traj.t_min_Nb = w.t_start;

  CoolingReport report;
  report.initial_Nb = initial.m[MomentState::kNb].real();
  report.n_cycles = w.n_cycles;
  report.cycle_end_Nb.reserve(static_cast<size_t>(w.n_cycles));

  const double width = w.width();
  MomentState state = initial;
  double offset = 0.0;  // global time = offset + schedule clock

  auto append = [&](const Trajectory& piece) {
    // The first sample duplicates the previously appended end state.
    const size_t from = traj.t.empty() ? 0 : 1;
    for (size_t i = from; i < piece.t.size(); ++i) {
      traj.t.push_back(offset + piece.t[i]);
      traj.schedule_time.push_back(piece.schedule_time[i]);
      MomentState st = piece.states[i];
      st.t = offset + piece.t[i];
      traj.states.push_back(std::move(st));
      traj.occ.push_back(piece.occ[i]);
    }
    if (piece.min_Nb < traj.min_Nb) {
      traj.min_Nb = piece.min_Nb;
      traj.t_min_Nb = offset + piece.t_min_Nb;
    }
    traj.stats.n_steps += piece.stats.n_steps;
    traj.stats.n_rejected += piece.stats.n_rejected;
    traj.stats.n_rhs += piece.stats.n_rhs;
    state = traj.states.back();
  };

  for (int cycle = 0; cycle < w.n_cycles; ++cycle) {
    Trajectory piece = integrate(state, s, p, w.t_start, w.t_end, opts);
    append(piece);
    report.cycle_end_Nb.push_back(traj.occ.back().N_b);
    if (hold_time > 0.0 && cycle + 1 < w.n_cycles) {
      IntegrateOptions hold_opts = opts;
      hold_opts.pump_off = true;
      Trajectory rest =
          integrate(state, s, p, w.t_end, w.t_end + hold_time, hold_opts);
      append(rest);
    }
    offset += width + (cycle + 1 < w.n_cycles ? hold_time : 0.0);
  }

  report.N_b_min = traj.min_Nb;
  report.t_min = traj.t_min_Nb;
  report.final_Nb = traj.occ.back().N_b;
  report.stats = traj.stats;
  return {std::move(traj), report};
}

}  // namespace stirap
