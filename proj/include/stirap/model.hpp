#pragma once

#include <Eigen/Dense>

#include "stirap/common.hpp"
#include "stirap/errors.hpp"
#include "stirap/pulses.hpp"

namespace stirap {

// Static physical rates and bath occupancies, all in units of the mechanical
// frequency omega_b (time unit 1/omega_b). kappa_* are ENERGY decay rates:
// a free damped mode obeys d<n>/dt = -kappa (<n> - nbar). The quality factor
// form is kappa_b = omega_b / Q_b.
struct SystemParams {
  double omega_b = 1.0;
  double kappa_a = 0.0;
  double kappa_c = 0.0;
  double kappa_b = 0.0;
  double g_ca = 0.0;  // static cavity-cavity coupling, used by mean_fields
  double nbar_a = 0.0;
  double nbar_c = 0.0;
  double nbar_b = 0.0;

  double Q_b() const { return omega_b / kappa_b; }
  void set_Q_b(double Q) { kappa_b = omega_b / Q; }

  // Damping-free scenarios are legitimate (kappa = 0), so only negative
  // rates and occupancies are rejected.
  void validate() const {
    if (!(omega_b > 0.0)) throw ConfigError("omega_b must be > 0");
    if (kappa_a < 0.0 || kappa_c < 0.0 || kappa_b < 0.0)
      throw ConfigError("decay rates must be >= 0");
    if (nbar_a < 0.0 || nbar_c < 0.0 || nbar_b < 0.0)
      throw ConfigError("bath occupancies must be >= 0");
  }
};

// Coherent drive on the primary cavity and the bare optomechanical coupling.
struct DriveParams {
  Complex eps_p{0.0, 0.0};  // drive amplitude
  double Delta_a = 0.0;     // auxiliary-cavity detuning omega_a - omega_p
  double Delta_c = 0.0;     // primary-cavity detuning omega_c - omega_p
  double g_cb = 0.0;        // single-photon optomechanical coupling
};

// Steady-state mean amplitudes of modes a, b, c under the drive.
struct MeanFields {
  Complex alpha{0.0, 0.0};
  Complex beta{0.0, 0.0};
  Complex eta{0.0, 0.0};
};

// Steady state of the coupled mean-field (Langevin amplitude-decay)
// equations, with the small radiation-pressure shift of the primary cavity
// neglected. Throws SingularDenominator when the drive sits at an exact
// interference zero of the coupled-cavity response.
MeanFields mean_fields(const DriveParams& d, const SystemParams& p);

// Residuals of the three steady-state equations at the given amplitudes;
// vanishes (to rounding) at the output of mean_fields. Kept public as the
// correctness oracle for mean_fields.
Eigen::Vector3cd steady_state_residual(const MeanFields& f, const DriveParams& d,
                                       const SystemParams& p);

// Drive-enhanced linearized optomechanical coupling G_cb = eta * g_cb.
Complex linearized_coupling(const DriveParams& d, const SystemParams& p);

// The canonical schedule family: detuning constants kappa_delta = 14.05 and
// h_delta = 13.94, and times that scale inversely with the drive strength
// x = Omega0 / omega_b. The four time constants were fit by least squares
// over the published schedule table; each tabulated row is reproduced to
// four significant figures.
PulseSchedule canonical_schedule(double Omega0_over_wb);

}  // namespace stirap
