#include <doctest.h>

#include <cmath>
#include <complex>

#include <Eigen/Dense>

#include "stirap/evolve.hpp"
#include "stirap/fock.hpp"
#include "stirap/model.hpp"

using namespace stirap;

namespace {

PulseSchedule coupling_free() {
  PulseSchedule s;
  s.Omega0 = 1e-30;
  s.t_c = 0.0;
  s.T = 1.0;
  s.h_delta = 0.0;
  s.kappa_delta = 14.05;
  s.tau = 1.0;
  s.tau_ch = 1.0;
  return s;
}

int basis_index(const FockConfig& f, int ia, int ic, int ib) {
  return (ia * (f.n_max_c + 1) + ic) * (f.n_max_b + 1) + ib;
}

}  // namespace

TEST_CASE("FockConfig dimension guard sits at 4096") {
  FockConfig ok;
  ok.n_max_a = 15;
  ok.n_max_c = 15;
  ok.n_max_b = 15;  // 16^3 = 4096 exactly
  CHECK_NOTHROW(ok.validate());
  CHECK(ok.dim() == 4096);

  FockConfig big = ok;
  big.n_max_a = 16;
  CHECK_THROWS_AS(big.validate(), DimensionGuard);
}

TEST_CASE("annihilation operators follow the (a, c, b) Kronecker ordering") {
  FockConfig f;
  f.n_max_a = 2;
  f.n_max_c = 3;
  f.n_max_b = 2;
  FockOperators ops = make_operators(f);

  Eigen::VectorXcd e = Eigen::VectorXcd::Zero(f.dim());
  e[basis_index(f, 1, 0, 0)] = 1.0;
  Eigen::VectorXcd lowered = ops.a * e;
  CHECK(std::abs(lowered[basis_index(f, 0, 0, 0)] - 1.0) < 1e-15);
  CHECK(lowered.norm() == doctest::Approx(1.0).epsilon(1e-14));

  e.setZero();
  e[basis_index(f, 0, 2, 0)] = 1.0;
  lowered = ops.c * e;
  CHECK(std::abs(lowered[basis_index(f, 0, 1, 0)] - std::sqrt(2.0)) < 1e-14);

  e.setZero();
  e[basis_index(f, 0, 0, 2)] = 1.0;
  lowered = ops.b * e;
  CHECK(std::abs(lowered[basis_index(f, 0, 0, 1)] - std::sqrt(2.0)) < 1e-14);
}

TEST_CASE("moments_of reads pure and thermal states correctly") {
  FockConfig f;
  f.n_max_a = 4;
  f.n_max_c = 4;
  f.n_max_b = 4;
  FockOperators ops = make_operators(f);

  Vector12c m = moments_of(fock_state(f, 1, 0, 1), ops);
  CHECK(m[MomentState::kNa].real() == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(m[MomentState::kNc].real() == doctest::Approx(0.0).epsilon(1e-13));
  CHECK(m[MomentState::kNb].real() == doctest::Approx(1.0).epsilon(1e-13));
  for (int i = 3; i < 12; ++i) CHECK(std::abs(m[i]) < 1e-13);

  Vector12c th = moments_of(thermal_state(f, 0.2, 0.1, 0.3), ops);
  CHECK(th[MomentState::kNa].real() == doctest::Approx(0.2).epsilon(1e-2));
  CHECK(th[MomentState::kNc].real() == doctest::Approx(0.1).epsilon(1e-2));
  CHECK(th[MomentState::kNb].real() == doctest::Approx(0.3).epsilon(1e-2));

  // Thermal construction zeroes the top level so the leak detector starts
  // clean, and renormalizes to unit trace.
  Eigen::MatrixXcd rho = thermal_state(f, 0.2, 0.1, 0.3);
  CHECK(rho.trace().real() == doctest::Approx(1.0).epsilon(1e-12));
  double top = 0.0;
  for (int ia = 0; ia <= f.n_max_a; ++ia)
    for (int ic = 0; ic <= f.n_max_c; ++ic)
      top += rho(basis_index(f, ia, ic, f.n_max_b), basis_index(f, ia, ic, f.n_max_b))
                 .real();
  CHECK(top == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
}

TEST_CASE("pure_state builds a rank-one density matrix") {
  Eigen::VectorXcd psi(4);
  psi << Complex(0.5, 0.0), Complex(0.0, 0.5), Complex(0.5, 0.0), Complex(0.5, 0.0);
  Eigen::MatrixXcd rho = pure_state(psi);
  CHECK(rho.trace().real() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK((rho - rho.adjoint()).norm() < 1e-14);
  CHECK((rho * rho - rho).norm() < 1e-13);
}

TEST_CASE("Liouvillian adjoint annihilates the identity (trace preservation)") {
  FockConfig f;  // default 4x4x4 levels
  const int dim = f.dim();
  PulseSchedule s = canonical_schedule(0.6);
  SystemParams p;
  p.kappa_a = 0.3;
  p.kappa_c = 0.7;
  p.kappa_b = 0.05;
  p.nbar_a = 0.1;
  p.nbar_b = 0.4;

  Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(dim, dim);
  Eigen::RowVectorXcd id_vec =
      Eigen::Map<const Eigen::VectorXcd>(id.data(), dim * dim).transpose();

  for (bool cr : {false, true}) {
    SparseC L = build_liouvillian(37.0, s, p, f, cr);
    Eigen::RowVectorXcd left = id_vec * L;
    CHECK(left.cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("coupling-free lossless Liouvillian kills diagonal states") {
  FockConfig f;
  PulseSchedule s = coupling_free();
  SystemParams p;  // kappa = 0

  SparseC L = build_liouvillian(0.4, s, p, f, true);
  Eigen::MatrixXcd rho = fock_state(f, 1, 2, 0);
  Eigen::VectorXcd drho = L * Eigen::Map<const Eigen::VectorXcd>(rho.data(), f.dim() * f.dim());
  CHECK(drho.cwiseAbs().maxCoeff() < 1e-25);
}

TEST_CASE("damped thermal b-mode decays on the closed form") {
  FockConfig f;
  f.n_max_a = 1;
  f.n_max_c = 1;
  f.n_max_b = 5;
  PulseSchedule s = coupling_free();
  SystemParams p;
  p.kappa_b = 0.05;

  Eigen::MatrixXcd rho0 = thermal_state(f, 0.0, 0.0, 0.5);
  FockOperators ops = make_operators(f);
  const double n0 = moments_of(rho0, ops)[MomentState::kNb].real();

  OracleOptions opts;
  opts.counter_rotating = false;
  opts.n_samples = 41;
  OracleTrajectory traj = evolve_density(rho0, s, p, f, 0.0, 30.0, opts);

  REQUIRE(traj.t.size() == 41);
  for (size_t i = 0; i < traj.t.size(); ++i) {
    const double expect = n0 * std::exp(-p.kappa_b * traj.t[i]);
    CHECK(std::abs(traj.moments[i][MomentState::kNb].real() - expect) < 1e-6);
    CHECK(std::abs(traj.moments[i][MomentState::kNb].imag()) < 1e-10);
  }
  CHECK(traj.max_leak < 1e-6);
}

TEST_CASE("single phonon rides the weak-drive schedule into mode a") {
  // The RWA conserves the single excitation, so two retained levels per mode
  // keep every top level empty throughout.
  FockConfig f;
  f.n_max_a = 2;
  f.n_max_c = 2;
  f.n_max_b = 2;
  PulseSchedule s = canonical_schedule(0.1);
  SystemParams p;  // lossless

  OracleOptions opts;
  opts.counter_rotating = false;

  Eigen::MatrixXcd rho0 = fock_state(f, 0, 0, 1);
  OracleTrajectory traj =
      evolve_density(rho0, s, p, f, -s.t_final(), s.t_final(), opts);

  CHECK(traj.moments.back()[MomentState::kNa].real() >= 0.99);
  CHECK(traj.moments.back()[MomentState::kNb].real() <= 0.01);
}

TEST_CASE("an initial state sitting on the top level trips the leak detector") {
  FockConfig f;
  f.n_max_a = 1;
  f.n_max_c = 1;
  f.n_max_b = 1;
  PulseSchedule s = canonical_schedule(0.5);
  SystemParams p;

  // n_b = 1 IS the top retained level here.
  Eigen::MatrixXcd rho0 = fock_state(f, 0, 0, 1);
  OracleOptions opts;
  opts.counter_rotating = true;
  CHECK_THROWS_AS(evolve_density(rho0, s, p, f, 0.0, 1.0, opts), TruncationLeak);
}

TEST_CASE("oracle agrees with the moment engine on a small damped instance") {
  FockConfig f;
  f.n_max_b = 4;  // the hottest mode gets one spare level
  PulseSchedule s;
  s.Omega0 = 0.12;
  s.t_c = 0.0;
  s.T = 1.0;
  s.kappa_delta = 2.0;
  s.h_delta = 0.5;
  s.tau = 1.5;
  s.tau_ch = 0.5;

  SystemParams p;
  p.kappa_a = 0.05;
  p.kappa_c = 0.08;
  p.kappa_b = 0.02;
  p.nbar_b = 0.01;

  OracleOptions oo;
  oo.counter_rotating = false;
  oo.n_samples = 51;
  oo.ode.rtol = 1e-9;
  oo.ode.atol = 1e-12;
  Eigen::MatrixXcd rho0 = thermal_state(f, 0.02, 0.05, 0.15);
  OracleTrajectory oracle =
      evolve_density(rho0, s, p, f, -s.t_final(), s.t_final(), oo);
  CHECK(oracle.max_leak < 1e-4);

  FockOperators ops = make_operators(f);
  MomentState init;
  init.m = moments_of(rho0, ops);
  IntegrateOptions io;
  io.counter_rotating = false;
  io.n_samples = 51;
  io.ode.rtol = 1e-10;
  io.ode.atol = 1e-13;
  Trajectory mom = integrate(init, s, p, -s.t_final(), s.t_final(), io);

  REQUIRE(mom.t.size() == oracle.t.size());
  double worst = 0.0;
  for (size_t i = 0; i < mom.t.size(); ++i) {
    REQUIRE(mom.t[i] == doctest::Approx(oracle.t[i]).epsilon(1e-12));
    for (int q = 0; q < 12; ++q) {
      double ref = 0.0;
      for (const auto& mo : oracle.moments) ref = std::max(ref, std::abs(mo[q]));
      const double err =
          std::abs(mom.states[i].m[q] - oracle.moments[i][q]) / std::max(ref, 1e-9);
      worst = std::max(worst, err);
    }
  }
  CHECK(worst <= 1e-3);
}
