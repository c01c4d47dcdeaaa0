#include "stirap/fock.hpp"

#include <cmath>
#include <string>
#include <utility>

#include <unsupported/Eigen/KroneckerProduct>

#include "stirap/errors.hpp"

namespace stirap {

namespace {

SparseC single_mode_ladder(int n_max) {
  SparseC m(n_max + 1, n_max + 1);
  std::vector<Eigen::Triplet<Complex>> trips;
  trips.reserve(static_cast<size_t>(n_max));
  for (int n = 1; n <= n_max; ++n) {
    trips.emplace_back(n - 1, n, Complex(std::sqrt(double(n)), 0.0));
  }
  m.setFromTriplets(trips.begin(), trips.end());
  return m;
}

SparseC identity(int d) {
  SparseC m(d, d);
  m.setIdentity();
  return m;
}

std::vector<double> thermal_weights(int n_max, double nbar) {
  std::vector<double> w(static_cast<size_t>(n_max) + 1, 0.0);
  if (nbar <= 0.0 || n_max == 0) {
    w[0] = 1.0;
    return w;
  }
  const double r = nbar / (1.0 + nbar);
  double sum = 0.0;
  for (int n = 0; n < n_max; ++n) {  // top level deliberately left empty
    w[static_cast<size_t>(n)] = std::pow(r, n);
    sum += w[static_cast<size_t>(n)];
  }
  for (int n = 0; n < n_max; ++n) w[static_cast<size_t>(n)] /= sum;
  return w;
}

// Hamiltonian pieces and dissipator operators reused across evaluations.
struct LiouvillianPieces {
  SparseC number_a, number_c;
  SparseC bs_ca;    // c+a + a+c
  SparseC bs_cb;    // c+b + b+c
  SparseC pair_cb;  // c b
  SparseC pair_cb_dag;
  struct Mode {
    double kappa, nbar;
    SparseC x, xd, nx, xxd;
  };
  std::vector<Mode> modes;  // only modes with kappa > 0
};

LiouvillianPieces make_pieces(const FockOperators& ops, const SystemParams& p) {
  LiouvillianPieces out;
  const SparseC ad = ops.a.adjoint();
  const SparseC cd = ops.c.adjoint();
  const SparseC bd = ops.b.adjoint();
  out.number_a = ad * ops.a;
  out.number_c = cd * ops.c;
  out.bs_ca = SparseC(cd * ops.a) + SparseC(ad * ops.c);
  out.bs_cb = SparseC(cd * ops.b) + SparseC(bd * ops.c);
  out.pair_cb = ops.c * ops.b;
  out.pair_cb_dag = out.pair_cb.adjoint();
  const std::pair<const SparseC*, std::pair<double, double>> raw[3] = {
      {&ops.a, {p.kappa_a, p.nbar_a}},
      {&ops.c, {p.kappa_c, p.nbar_c}},
      {&ops.b, {p.kappa_b, p.nbar_b}},
  };
  for (const auto& [op, kn] : raw) {
    if (kn.first <= 0.0) continue;
    LiouvillianPieces::Mode m;
    m.kappa = kn.first;
    m.nbar = kn.second;
    m.x = *op;
    m.xd = op->adjoint();
    m.nx = m.xd * m.x;
    m.xxd = m.x * m.xd;
    out.modes.push_back(std::move(m));
  }
  return out;
}

SparseC hamiltonian_at(double t, const PulseSchedule& s, const SystemParams& p,
                       const LiouvillianPieces& lp, bool counter_rotating) {
  const Detunings d = detunings(t, s);
  const double G = 0.5 * omega_p(t, s);
  SparseC h = Complex(d.delta_a) * lp.number_a + Complex(d.delta_c) * lp.number_c +
              Complex(s.g_ca()) * lp.bs_ca + Complex(G) * lp.bs_cb;
  if (counter_rotating) {
    const Complex e = std::polar(1.0, 2.0 * p.omega_b * t);
    h = h + (G * e) * lp.pair_cb + (G * std::conj(e)) * lp.pair_cb_dag;
  }
  return h;
}

}  // namespace

void FockConfig::validate() const {
  if (n_max_a < 0 || n_max_c < 0 || n_max_b < 0) {
    throw DimensionGuard("Fock cutoffs must be nonnegative");
  }
  if (dim() > 4096) {
    throw DimensionGuard("Fock dimension " + std::to_string(dim()) +
                         " exceeds the guard of 4096");
  }
}

FockOperators make_operators(const FockConfig& f) {
  f.validate();
  FockOperators ops;
  ops.config = f;
  const SparseC a1 = single_mode_ladder(f.n_max_a);
  const SparseC c1 = single_mode_ladder(f.n_max_c);
  const SparseC b1 = single_mode_ladder(f.n_max_b);
  const SparseC ia = identity(f.n_max_a + 1);
  const SparseC ic = identity(f.n_max_c + 1);
  const SparseC ib = identity(f.n_max_b + 1);

  const SparseC ic_ib = Eigen::kroneckerProduct(ic, ib).eval();
  ops.a = Eigen::kroneckerProduct(a1, ic_ib).eval();
  ops.c = Eigen::kroneckerProduct(ia, Eigen::kroneckerProduct(c1, ib).eval()).eval();
  ops.b = Eigen::kroneckerProduct(ia, Eigen::kroneckerProduct(ic, b1).eval()).eval();

  const SparseC ad = ops.a.adjoint();
  const SparseC cd = ops.c.adjoint();
  const SparseC bd = ops.b.adjoint();
  ops.observables[0] = ad * ops.a;
  ops.observables[1] = cd * ops.c;
  ops.observables[2] = bd * ops.b;
  ops.observables[3] = ad * ops.c;
  ops.observables[4] = ad * ops.b;
  ops.observables[5] = cd * ops.b;
  ops.observables[6] = ops.c * ops.b;
  ops.observables[7] = ad * cd;
  ops.observables[8] = ad * bd;
  ops.observables[9] = ops.b * ops.b;
  ops.observables[10] = cd * cd;
  ops.observables[11] = ad * ad;
  return ops;
}

Eigen::MatrixXcd thermal_state(const FockConfig& f, double n_a, double n_c,
                               double n_b) {
  f.validate();
  const std::vector<double> wa = thermal_weights(f.n_max_a, n_a);
  const std::vector<double> wc = thermal_weights(f.n_max_c, n_c);
  const std::vector<double> wb = thermal_weights(f.n_max_b, n_b);
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(f.dim(), f.dim());
  int idx = 0;
  for (size_t ia = 0; ia < wa.size(); ++ia) {
    for (size_t ic = 0; ic < wc.size(); ++ic) {
      for (size_t ib = 0; ib < wb.size(); ++ib) {
        rho(idx, idx) = wa[ia] * wc[ic] * wb[ib];
        ++idx;
      }
    }
  }
  return rho;
}

Eigen::MatrixXcd fock_state(const FockConfig& f, int n_a, int n_c, int n_b) {
  f.validate();
  if (n_a < 0 || n_a > f.n_max_a || n_c < 0 || n_c > f.n_max_c || n_b < 0 ||
      n_b > f.n_max_b) {
    throw ConfigError("Fock occupation outside the configured cutoffs");
  }
  const int idx = (n_a * (f.n_max_c + 1) + n_c) * (f.n_max_b + 1) + n_b;
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(f.dim(), f.dim());
  rho(idx, idx) = 1.0;
  return rho;
}

Eigen::MatrixXcd pure_state(const Eigen::VectorXcd& psi) {
  const double n2 = psi.squaredNorm();
  if (n2 <= 0.0) throw ConfigError("pure state requires a nonzero amplitude vector");
  return psi * psi.adjoint() / n2;
}

Vector12c moments_of(const Eigen::MatrixXcd& rho, const FockOperators& ops) {
  Vector12c m;
  for (int p = 0; p < 12; ++p) {
    Complex acc(0.0, 0.0);
    const SparseC& o = ops.observables[static_cast<size_t>(p)];
    for (int k = 0; k < o.outerSize(); ++k) {
      for (SparseC::InnerIterator it(o, k); it; ++it) {
        // tr(rho O) = sum_{l,k} rho(k, l) O(l, k)
        acc += rho(it.col(), it.row()) * it.value();
      }
    }
    m[p] = acc;
  }
  return m;
}

SparseC build_liouvillian(double t, const PulseSchedule& s,
                          const SystemParams& p, const FockConfig& f,
                          bool include_counter_rotating) {
  f.validate();
  const FockOperators ops = make_operators(f);
  const LiouvillianPieces lp = make_pieces(ops, p);
  const SparseC h = hamiltonian_at(t, s, p, lp, include_counter_rotating);
  const SparseC id = identity(f.dim());

  // vec(rho H) = (H^T x I) vec(rho), vec(H rho) = (I x H) vec(rho).
  SparseC lv = kImag * (Eigen::kroneckerProduct(SparseC(h.transpose()), id).eval() -
                        Eigen::kroneckerProduct(id, h).eval());
  for (const auto& m : lp.modes) {
    const double down = m.kappa * (m.nbar + 1.0);
    const double up = m.kappa * m.nbar;
    const SparseC xconj = m.x.conjugate();
    const SparseC xt = m.x.transpose();
    lv = lv + Complex(down) * (Eigen::kroneckerProduct(xconj, m.x).eval() -
                               0.5 * Eigen::kroneckerProduct(
                                         SparseC(m.nx.transpose()), id).eval() -
                               0.5 * Eigen::kroneckerProduct(id, m.nx).eval());
    if (up > 0.0) {
      lv = lv + Complex(up) * (Eigen::kroneckerProduct(xt, m.xd).eval() -
                               0.5 * Eigen::kroneckerProduct(
                                         SparseC(m.xxd.transpose()), id).eval() -
                               0.5 * Eigen::kroneckerProduct(id, m.xxd).eval());
    }
  }
  return lv;
}

OracleTrajectory evolve_density(const Eigen::MatrixXcd& initial,
                                const PulseSchedule& s, const SystemParams& p,
                                const FockConfig& f, double t0, double t1,
                                const OracleOptions& opts) {
  f.validate();
  s.validate();
  p.validate();
  const int dim = f.dim();
  if (initial.rows() != dim || initial.cols() != dim) {
    throw ConfigError("initial density matrix does not match the Fock space");
  }
  if (std::abs(initial.trace().real() - 1.0) > 1e-8 ||
      std::abs(initial.trace().imag()) > 1e-8) {
    throw UnphysicalState("initial density matrix is not normalized");
  }
  if ((initial - initial.adjoint()).cwiseAbs().maxCoeff() > 1e-10) {
    throw UnphysicalState("initial density matrix is not Hermitian");
  }

  const FockOperators ops = make_operators(f);
  const LiouvillianPieces lp = make_pieces(ops, p);

  // Product-space indices carrying the top level of each mode.
  std::array<std::vector<int>, 3> top;
  {
    int idx = 0;
    for (int ia = 0; ia <= f.n_max_a; ++ia) {
      for (int ic = 0; ic <= f.n_max_c; ++ic) {
        for (int ib = 0; ib <= f.n_max_b; ++ib) {
          if (ia == f.n_max_a) top[0].push_back(idx);
          if (ic == f.n_max_c) top[1].push_back(idx);
          if (ib == f.n_max_b) top[2].push_back(idx);
          ++idx;
        }
      }
    }
  }

  auto rhs = [&](double t, const Eigen::VectorXcd& y, Eigen::VectorXcd& dy) {
    Eigen::Map<const Eigen::MatrixXcd> rho(y.data(), dim, dim);
    Eigen::Map<Eigen::MatrixXcd> drho(dy.data(), dim, dim);
    const SparseC h = hamiltonian_at(t, s, p, lp, opts.counter_rotating);
    drho = kImag * (rho * h - h * rho);
    for (const auto& m : lp.modes) {
      const double down = m.kappa * (m.nbar + 1.0);
      drho += down * (m.x * rho * m.xd).eval();
      drho -= (0.5 * down) * (m.nx * rho + rho * m.nx).eval();
      if (m.nbar > 0.0) {
        const double up = m.kappa * m.nbar;
        drho += up * (m.xd * rho * m.x).eval();
        drho -= (0.5 * up) * (m.xxd * rho + rho * m.xxd).eval();
      }
    }
  };

  OracleTrajectory traj;
  auto observer = [&](double t, const Eigen::VectorXcd& y, bool is_sample) {
    if (!is_sample) return;
    Eigen::Map<const Eigen::MatrixXcd> rho(y.data(), dim, dim);
    const Complex tr = rho.trace();
    if (std::abs(tr - Complex(1.0, 0.0)) > 1e-8) {
      throw UnphysicalState("density-matrix trace drifted to " +
                            std::to_string(tr.real()) + " at t = " +
                            std::to_string(t));
    }
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-10) {
      throw UnphysicalState("density matrix lost Hermiticity at t = " +
                            std::to_string(t));
    }
    double worst = 0.0;
    const char* names[3] = {"a", "c", "b"};
    for (int mode = 0; mode < 3; ++mode) {
      double pop = 0.0;
      for (int idx : top[static_cast<size_t>(mode)]) pop += rho(idx, idx).real();
      if (pop > worst) worst = pop;
      if (pop > opts.leak_tol) {
        throw TruncationLeak("top Fock level of mode " +
                             std::string(names[mode]) + " holds " +
                             std::to_string(pop) + " population at t = " +
                             std::to_string(t));
      }
    }
    traj.t.push_back(t);
    traj.moments.push_back(moments_of(rho, ops));
    traj.top_leak.push_back(worst);
    traj.max_leak = std::max(traj.max_leak, worst);
  };

  Eigen::VectorXcd y0 =
      Eigen::Map<const Eigen::VectorXcd>(initial.data(), dim * dim);
  const int n_samples = std::max(opts.n_samples, 2);
  traj.stats = integrate_adaptive(rhs, y0, t0, t1, opts.ode,
                                  linspace(t0, t1, n_samples), observer);
  return traj;
}

}  // namespace stirap
