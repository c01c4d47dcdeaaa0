#include "stirap/model.hpp"

#include <cmath>

namespace stirap {

namespace {

// Canonical schedule constants: x * tau_ch, x * tau, x * T, x * t_c with
// x = Omega0 / omega_b, plus the x-independent detuning shape parameters.
constexpr double kTauChTimesX = 16.495625;
constexpr double kTauTimesX = 110.170000;
constexpr double kTTimesX = 10.874500;
constexpr double kTcTimesX = 61.225375;
constexpr double kKappaDelta = 14.05;
constexpr double kHDelta = 13.94;

}  // namespace

MeanFields mean_fields(const DriveParams& d, const SystemParams& p) {
  const Complex ra(p.kappa_a, d.Delta_a);  // kappa_a + i Delta_a
  const Complex rc(p.kappa_c, d.Delta_c);
  const Complex rb(p.kappa_b, p.omega_b);
  const Complex denom = p.g_ca * p.g_ca + rc * ra;
  if (std::abs(denom) < 1e-12) {
    throw SingularDenominator(
        "coupled-cavity response denominator |g_ca^2 + (i Delta_c + kappa_c)"
        "(i Delta_a + kappa_a)| < 1e-12");
  }
  MeanFields f;
  f.eta = d.eps_p * ra / denom;
  if (std::abs(ra) < 1e-12) {
    // Undriven auxiliary cavity with vanishing response rate: the coupled
    // drive g_ca * eta must vanish too, otherwise no steady state exists.
    if (std::abs(p.g_ca * f.eta) >= 1e-12) {
      throw SingularDenominator(
          "auxiliary-cavity response (i Delta_a + kappa_a) vanishes while the "
          "cavity is driven through g_ca");
    }
    f.alpha = Complex{0.0, 0.0};
  } else {
    f.alpha = -kImag * p.g_ca * f.eta / ra;
  }
  f.beta = -kImag * d.g_cb * std::norm(f.eta) / rb;
  return f;
}

Eigen::Vector3cd steady_state_residual(const MeanFields& f, const DriveParams& d,
                                       const SystemParams& p) {
  const Complex ra(p.kappa_a, d.Delta_a);
  const Complex rc(p.kappa_c, d.Delta_c);
  const Complex rb(p.kappa_b, p.omega_b);
  Eigen::Vector3cd r;
  r[0] = -ra * f.alpha - kImag * p.g_ca * f.eta;
  r[1] = -rc * f.eta - kImag * p.g_ca * f.alpha + d.eps_p;
  r[2] = -rb * f.beta - kImag * d.g_cb * std::norm(f.eta);
  return r;
}

Complex linearized_coupling(const DriveParams& d, const SystemParams& p) {
  return mean_fields(d, p).eta * d.g_cb;
}

PulseSchedule canonical_schedule(double Omega0_over_wb) {
  if (!(Omega0_over_wb > 0.0)) {
    throw NonPositiveAmplitude("canonical_schedule requires Omega0 / omega_b > 0");
  }
  const double x = Omega0_over_wb;
  PulseSchedule s;
  s.Omega0 = x;
  s.tau_ch = kTauChTimesX / x;
  s.tau = kTauTimesX / x;
  s.T = kTTimesX / x;
  s.t_c = kTcTimesX / x;
  s.kappa_delta = kKappaDelta;
  s.h_delta = kHDelta;
  return s;
}

}  // namespace stirap
