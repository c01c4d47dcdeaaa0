#pragma once

#include <array>
#include <vector>

#include <Eigen/SparseCore>

#include "stirap/common.hpp"
#include "stirap/model.hpp"
#include "stirap/ode.hpp"
#include "stirap/pulses.hpp"

namespace stirap {

using SparseC = Eigen::SparseMatrix<Complex>;

// Truncated Fock space, one cutoff per mode; n_max_x is the highest kept
// occupation number, so the mode carries n_max_x + 1 levels.
struct FockConfig {
  int n_max_a = 3;
  int n_max_c = 3;
  int n_max_b = 3;

  int dim() const {
    return (n_max_a + 1) * (n_max_c + 1) * (n_max_b + 1);
  }
  // Throws DimensionGuard when the product space exceeds 4096 states.
  void validate() const;
};

// Annihilation operators on the product space, Kronecker-ordered (a, c, b),
// plus the twelve canonical moment observables in MomentState order.
struct FockOperators {
  FockConfig config;
  SparseC a, c, b;
  std::array<SparseC, 12> observables;
};

FockOperators make_operators(const FockConfig& f);

// Product of single-mode thermal states. The top level of each mode is
// zeroed (and the distribution renormalized) so a freshly constructed state
// never trips the truncation-leak detector.
Eigen::MatrixXcd thermal_state(const FockConfig& f, double n_a, double n_c,
                               double n_b);

// |n_a, n_c, n_b><n_a, n_c, n_b|.
Eigen::MatrixXcd fock_state(const FockConfig& f, int n_a, int n_c, int n_b);

// psi psi+ for a normalized amplitude vector on the product space.
Eigen::MatrixXcd pure_state(const Eigen::VectorXcd& psi);

// tr(rho O_p) for the twelve canonical observables.
Vector12c moments_of(const Eigen::MatrixXcd& rho, const FockOperators& ops);

// Explicit matrix representation of the Lindblad generator on vec(rho)
// (column-major), dimension dim^2 x dim^2. Same Hamiltonian and dissipators
// as the moment generator.
SparseC build_liouvillian(double t, const PulseSchedule& s,
                          const SystemParams& p, const FockConfig& f,
                          bool include_counter_rotating);

struct OracleOptions {
  OdeOptions ode;  // defaults as in OdeOptions
  int n_samples = 201;
  bool counter_rotating = true;
  // Maximum tolerated population in any mode's top Fock level.
  double leak_tol = 1e-4;
};

struct OracleTrajectory {
  std::vector<double> t;
  std::vector<Vector12c> moments;
  std::vector<double> top_leak;  // worst top-level population per sample
  double max_leak = 0.0;
  OdeStats stats;
};

// Integrates the truncated master equation and extracts the canonical
// moments at the sample times. Throws TruncationLeak when any top Fock
// level accumulates more than leak_tol population, and UnphysicalState when
// trace or Hermiticity drift beyond their invariants.
OracleTrajectory evolve_density(const Eigen::MatrixXcd& initial,
                                const PulseSchedule& s, const SystemParams& p,
                                const FockConfig& f, double t0, double t1,
                                const OracleOptions& opts = {});

}  // namespace stirap
