#pragma once

#include "stirap/common.hpp"
#include "stirap/model.hpp"
#include "stirap/pulses.hpp"

namespace stirap {

// Second-order moments of the linearized three-mode system. The twelve
// canonical moments close under the quadratic Lindblad generator once the
// remaining products are eliminated through conjugation and same-mode
// commutators.
struct MomentState {
  enum Index {
    kNa = 0,    // <a+ a>
    kNc = 1,    // <c+ c>
    kNb = 2,    // <b+ b>
    kAdC = 3,   // <a+ c>
    kAdB = 4,   // <a+ b>
    kCdB = 5,   // <c+ b>
    kCB = 6,    // <c b>
    kAdCd = 7,  // <a+ c+>
    kAdBd = 8,  // <a+ b+>
    kBB = 9,    // <b b>
    kCdCd = 10, // <c+ c+>
    kAdAd = 11, // <a+ a+>
  };

  Vector12c m = Vector12c::Zero();
  double t = 0.0;

  // Uncorrelated thermal occupation of each mode.
  static MomentState thermal(double n_a, double n_c, double n_b, double t = 0.0);
};

// Scalar inputs of the moment generator at one instant.
struct GeneratorCoeffs {
  double delta_a = 0.0;
  double delta_c = 0.0;
  double G_cb = 0.0;  // optomechanical coupling omega_p(t) / 2
  double g_ca = 0.0;  // beam-splitter coupling Omega0 / 2
  // e^{+2 i omega_b t}, carried by the counter-rotating pair terms.
  Complex phase2wt = Complex(1.0, 0.0);
  bool counter_rotating = true;
};

GeneratorCoeffs schedule_coeffs(double t, const PulseSchedule& s,
                                const SystemParams& p, bool counter_rotating);

// Affine generator of the moment system at one instant,
//   dm/dt = M m + N conj(m) + v.
// The system is R-linear, not C-linear: eliminated moments (<c+ a>, <b+ c>,
// <cc>, ...) re-enter as conjugates of carried ones, so N is structurally
// nonzero even under the RWA. The counter-rotating pair terms add the two
// phase-carrying entries that feed <c+ c> and <b+ b> from conj(<cb>).
struct GeneratorSnapshot {
  Matrix12c M = Matrix12c::Zero();
  Matrix12c N = Matrix12c::Zero();
  Vector12c v = Vector12c::Zero();
};

GeneratorSnapshot build_generator(const GeneratorCoeffs& c, const SystemParams& p);
GeneratorSnapshot build_generator(double t, const PulseSchedule& s,
                                  const SystemParams& p,
                                  bool include_counter_rotating);

// Time derivative of the canonical moments; equivalent to applying
// build_generator but without materializing the matrices.
Vector12c moment_rhs(double t, const Vector12c& m, const PulseSchedule& s,
                     const SystemParams& p, bool include_counter_rotating);

struct Occupancies {
  double N_a = 0.0;
  double N_c = 0.0;
  double N_b = 0.0;
};

// Real parts of the number moments. Throws UnphysicalState when a number
// moment has an imaginary part or a negative real part beyond
// 1e-7 * max(1, |m|_inf).
Occupancies occupancies(const MomentState& state);

// Symmetrized quadrature covariance matrix (vacuum contribution included) in
// the basis (x_a, p_a, x_c, p_c, x_b, p_b).
Matrix6d covariance_matrix(const MomentState& state);

// Minimum eigenvalue of sigma + (i/2) Omega_sympl; physical states give a
// nonnegative value up to numerical tolerance.
double physicality_margin(const MomentState& state);

}  // namespace stirap
