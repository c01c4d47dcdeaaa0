#pragma once

#include <limits>
#include <string>
#include <vector>

#include "stirap/evolve.hpp"
#include "stirap/model.hpp"
#include "stirap/pulses.hpp"

namespace stirap {

// Routh-Hurwitz stability of steady-state sideband cooling at constant
// coupling G: true iff G^2 < omega_b^2/4 + kappa_c^2/16.
bool stability(double G, const SystemParams& p);

struct SidebandVerdict {
  bool stable = false;
  double n_limit = 0.0;  // first_term + second_term
  double first_term = 0.0;
  double second_term = 0.0;
  double cooperativity = 0.0;  // C = 4 G^2 / (kappa_b kappa_c)
  // The closed form assumes C >> 1; flagged (not fatal) when C < 10.
  bool low_cooperativity = false;
};

// Steady-state phonon limit of ordinary (constant-coupling) sideband
// cooling. Throws Unstable when the stability condition fails.
SidebandVerdict cooling_limit(double G, const SystemParams& p);

// One row of the cooling comparison: the analytic limit at constant
// coupling G next to the simulated iterated-pulse minimum.
struct CompareScenario {
  std::string name;
  double G = 0.0;  // constant coupling for the analytic columns
  SystemParams params;
  PulseSchedule schedule;
  TruncationWindow window;
  MomentState initial;
  bool counter_rotating = true;
};

struct CompareRow {
  std::string name;
  bool stable = false;
  double n_limit = std::numeric_limits<double>::quiet_NaN();
  double first_term = std::numeric_limits<double>::quiet_NaN();
  double second_term = std::numeric_limits<double>::quiet_NaN();
  double cooperativity = std::numeric_limits<double>::quiet_NaN();
  bool low_cooperativity = false;
  double N_min_SC = std::numeric_limits<double>::quiet_NaN();
  double final_Nb = std::numeric_limits<double>::quiet_NaN();
  std::string error;  // nonempty when the simulated column failed
};

// Evaluates every scenario: the analytic columns always, the simulated
// column via iterate_cooling unless analytic_only. Rows run concurrently on
// up to `jobs` threads; per-row failures are recorded in `error` rather than
// thrown.
std::vector<CompareRow> compare(const std::vector<CompareScenario>& scenarios,
                                const IntegrateOptions& opts = {},
                                int jobs = 1, bool analytic_only = false);

}  // namespace stirap
