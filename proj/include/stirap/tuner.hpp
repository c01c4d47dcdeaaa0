#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "stirap/evolve.hpp"
#include "stirap/model.hpp"
#include "stirap/pulses.hpp"

namespace stirap {

struct NelderMeadOptions {
  long max_evals = 200;
  double f_tol = 1e-10;  // simplex spread, relative to max(1, |f_best|)
  double x_tol = 1e-10;  // simplex diameter, relative to the box size
  int max_restarts = 3;  // deterministic restarts around the incumbent
  double init_step = 0.05;  // initial simplex step, fraction of the box
};

struct NelderMeadResult {
  Eigen::VectorXd x;
  double f = 0.0;
  long n_evals = 0;
  bool budget_exhausted = false;
};

// Bound-constrained Nelder-Mead; trial points outside [lo, hi] are folded
// back by reflection at the violated bound, so the objective is only ever
// evaluated inside the box. Deterministic for a given starting point.
NelderMeadResult nelder_mead(
    const std::function<double(const Eigen::VectorXd&)>& objective,
    const Eigen::VectorXd& x0, const Eigen::VectorXd& lo,
    const Eigen::VectorXd& hi, const NelderMeadOptions& opts = {});

// One tunable schedule/window parameter with its search interval.
struct TuneParam {
  std::string name;  // kappa_delta, h_delta, tau, tau_ch, t_c, T,
                     // t_start, t_end
  double lo = 0.0;
  double hi = 0.0;
};

struct TuneSpec {
  std::vector<TuneParam> params;
  long budget = 200;  // maximum objective evaluations
  PulseSchedule seed;
  TruncationWindow seed_window;
  double initial_Nb = 1000.0;  // objective starts from thermal (0, 0, N_b)
  void validate() const;
};

struct TuneEval {
  std::vector<double> values;  // parameter values, natural units, spec order
  double objective = 0.0;
};

struct TuneResult {
  PulseSchedule schedule;
  TruncationWindow window;
  double objective = 0.0;
  std::vector<TuneEval> log;
  bool budget_exhausted = false;
};

// Minimizes N_b_min from iterate_cooling over the requested parameters.
// Time-like parameters are searched as products with Omega0 for
// conditioning; failed evaluations (unstable, unphysical, invalid window)
// receive a large fixed penalty instead of aborting the search.
TuneResult tune(const TuneSpec& spec, const SystemParams& p,
                const IntegrateOptions& opts = {});

}  // namespace stirap
