#pragma once

#include <vector>

#include <Eigen/Dense>

#include "stirap/ode.hpp"
#include "stirap/pulses.hpp"

namespace stirap {

// Single-excitation Hamiltonian in the rotating wave approximation, basis
// ordered (b, c, a).
Eigen::Matrix3d rwa_hamiltonian(double t, const PulseSchedule& s);

struct StokesValues {
  double S0 = 0.0;
  double S_plus = 0.0;
  double S_minus = 0.0;
};

// Eigenvalues of the pump-free (Stokes) Hamiltonian: S0 = 0 and
// S+- = (delta_a + delta_c)/2 +- sqrt((delta_a - delta_c)^2 + Omega0^2)/2.
StokesValues stokes_eigenvalues(double t, const PulseSchedule& s);

// Eigenvalue branches of the full RWA Hamiltonian over the symmetric
// schedule domain, tracked by eigenvector continuity, together with the
// zero crossings of S+- and the avoided-crossing gaps they develop once the
// pump is applied.
struct AdiabaticSpectrum {
  std::vector<double> t;
  // lambda[i] holds the tracked eigenvalues at t[i], component 0/1/2 =
  // branch continuing S-/S0/S+ from the left domain edge.
  std::vector<Eigen::Vector3d> lambda;
  std::vector<StokesValues> stokes;
  std::vector<double> s_plus_crossings;   // bisection-refined roots of S+ = 0
  std::vector<double> s_minus_crossings;  // roots of S- = 0
  std::vector<GapLocation> gaps;  // one per crossing, ascending in time
  GapLocation gap;                // gap at the latest crossing
};

// Samples the spectrum at `resolution` points (>= 100), locates the S+- = 0
// crossings by bisection to |S| < 1e-10 * Omega0, and measures the minimum
// tracked-branch separation around each crossing. Throws NoGapFound when
// neither S+ nor S- changes sign over the domain.
AdiabaticSpectrum find_crossings_and_gap(const PulseSchedule& s, int resolution = 2000);

// Populations of the three modes under i dpsi/dt = H(t) psi over the full
// symmetric domain; amplitudes ordered (b, c, a) like rwa_hamiltonian.
struct TransferTrajectory {
  std::vector<double> t;
  std::vector<Eigen::Vector3cd> psi;
  std::vector<Eigen::Vector3d> populations;  // |psi_b|^2, |psi_c|^2, |psi_a|^2
  OdeStats stats;
};

inline OdeOptions unitary_transfer_defaults() {
  OdeOptions o;
  o.rtol = 1e-12;
  o.atol = 1e-12;
  o.method = OdeMethod::dop853;
  return o;
}

TransferTrajectory unitary_transfer(const PulseSchedule& s,
                                    const Eigen::Vector3cd& initial,
                                    const OdeOptions& opts = unitary_transfer_defaults(),
                                    int n_samples = 400);

}  // namespace stirap
