#include "stirap/spectral.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "stirap/errors.hpp"

namespace stirap {

Eigen::Matrix3d rwa_hamiltonian(double t, const PulseSchedule& s) {
  const double half_pump = 0.5 * omega_p(t, s);
  const double half_stokes = s.g_ca();
  const Detunings d = detunings(t, s);
  Eigen::Matrix3d h;
  h << 0.0, half_pump, 0.0,          //
      half_pump, d.delta_c, half_stokes,  //
      0.0, half_stokes, d.delta_a;
  return h;
}

StokesValues stokes_eigenvalues(double t, const PulseSchedule& s) {
  const Detunings d = detunings(t, s);
  const double mean = 0.5 * (d.delta_a + d.delta_c);
  const double split =
      0.5 * std::hypot(d.delta_a - d.delta_c, s.Omega0);
  StokesValues v;
  v.S0 = 0.0;
  v.S_plus = mean + split;
  v.S_minus = mean - split;
  return v;
}

namespace {

// Bisection root of f on [a, b] (f(a), f(b) of opposite sign) until
// |f| < value_tol at the midpoint or the bracket collapses.
template <class F>
double bisect_to_value(F&& f, double a, double b, double fa, double value_tol) {
  double mid = 0.5 * (a + b);
  for (int it = 0; it < 200; ++it) {
    mid = 0.5 * (a + b);
    const double fm = f(mid);
    if (std::abs(fm) < value_tol) return mid;
    if ((fm > 0.0) == (fa > 0.0)) {
      a = mid;
      fa = fm;
    } else {
      b = mid;
    }
    if (b - a < 1e-15 * std::max(1.0, std::abs(mid))) break;
  }
  return mid;
}

// Minimum separation of adjacent sorted eigenvalues of the RWA Hamiltonian.
double adjacent_gap(double t, const PulseSchedule& s) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(rwa_hamiltonian(t, s));
  const Eigen::Vector3d e = es.eigenvalues();
  return std::min(e[1] - e[0], e[2] - e[1]);
}

// Golden-section minimization of f on [a, b].
template <class F>
void golden_min(F&& f, double a, double b, double& x_min, double& f_min) {
  constexpr double invphi = 0.6180339887498949;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 120 && (b - a) > 1e-13 * std::max(1.0, std::abs(a)); ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  x_min = 0.5 * (a + b);
  f_min = f(x_min);
  if (fc < f_min) {
    x_min = c;
    f_min = fc;
  }
  if (fd < f_min) {
    x_min = d;
    f_min = fd;
  }
}

// Roots of value(t) over the grid, refined by bisection.
template <class F>
std::vector<double> grid_roots(F&& value, const std::vector<double>& grid,
                               double value_tol) {
  std::vector<double> roots;
  double prev = value(grid.front());
  for (size_t i = 1; i < grid.size(); ++i) {
    const double cur = value(grid[i]);
    if (prev == 0.0) {
      roots.push_back(grid[i - 1]);
    } else if ((prev > 0.0) != (cur > 0.0)) {
      roots.push_back(
          bisect_to_value(value, grid[i - 1], grid[i], prev, value_tol));
    }
    prev = cur;
  }
  return roots;
}

}  // namespace

AdiabaticSpectrum find_crossings_and_gap(const PulseSchedule& s, int resolution) {
  s.validate();
  resolution = std::max(resolution, 100);
  const double t_f = s.t_final();

  AdiabaticSpectrum out;
  out.t = linspace(-t_f, t_f, resolution);
  out.lambda.reserve(out.t.size());
  out.stokes.reserve(out.t.size());

  // Branch labels 0/1/2 = continuation of S-/S0/S+ from the left edge, where
  // the pump is negligible and the sorted spectrum matches the sorted Stokes
  // values. label[j] is the branch carried by the j-th sorted eigenvector.
  std::array<int, 3> label{};
  Eigen::Matrix3d prev_vectors;
  for (size_t i = 0; i < out.t.size(); ++i) {
    const double t = out.t[i];
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(rwa_hamiltonian(t, s));
    const Eigen::Vector3d e = es.eigenvalues();
    const Eigen::Matrix3d v = es.eigenvectors();
    if (i == 0) {
      const StokesValues sv = stokes_eigenvalues(t, s);
      std::array<std::pair<double, int>, 3> tagged{
          std::pair<double, int>{sv.S_minus, 0}, {sv.S0, 1}, {sv.S_plus, 2}};
      std::sort(tagged.begin(), tagged.end());
      for (int j = 0; j < 3; ++j) label[j] = tagged[static_cast<size_t>(j)].second;
    } else {
      // Assign each new eigenvector to the previous one it overlaps most:
      // test all six bijections and keep the largest total overlap.
      static constexpr int kPerms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                           {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
      const Eigen::Matrix3d overlap = (prev_vectors.transpose() * v).cwiseAbs();
      int best = 0;
      double best_sum = -1.0;
      for (int p = 0; p < 6; ++p) {
        const double sum = overlap(0, kPerms[p][0]) + overlap(1, kPerms[p][1]) +
                           overlap(2, kPerms[p][2]);
        if (sum > best_sum) {
          best_sum = sum;
          best = p;
        }
      }
      std::array<int, 3> next{};
      for (int j = 0; j < 3; ++j) next[kPerms[best][j]] = label[j];
      label = next;
    }
    prev_vectors = v;

    Eigen::Vector3d by_branch;
    for (int j = 0; j < 3; ++j) by_branch[label[j]] = e[j];
    out.lambda.push_back(by_branch);
    out.stokes.push_back(stokes_eigenvalues(t, s));
  }

  const double value_tol = 1e-10 * s.Omega0;
  out.s_plus_crossings = grid_roots(
      [&](double t) { return stokes_eigenvalues(t, s).S_plus; }, out.t, value_tol);
  out.s_minus_crossings = grid_roots(
      [&](double t) { return stokes_eigenvalues(t, s).S_minus; }, out.t, value_tol);

  std::vector<double> all = out.s_plus_crossings;
  all.insert(all.end(), out.s_minus_crossings.begin(),
             out.s_minus_crossings.end());
  std::sort(all.begin(), all.end());
  if (all.empty()) {
    throw NoGapFound(
        "neither Stokes eigenvalue changes sign over the schedule domain");
  }

  // At each crossing the two branches meeting there repel once the pump is
  // on; the avoided-crossing gap is the local minimum of the adjacent
  // sorted-eigenvalue separation.
  for (double root : all) {
    const double half_window = 3.0 * s.T;
    const double a = std::max(-t_f, root - half_window);
    const double b = std::min(t_f, root + half_window);
    const int n_scan = 241;
    double best_t = root;
    double best_g = adjacent_gap(root, s);
    const std::vector<double> scan = linspace(a, b, n_scan);
    size_t best_i = 0;
    for (size_t i = 0; i < scan.size(); ++i) {
      const double g = adjacent_gap(scan[i], s);
      if (g < best_g) {
        best_g = g;
        best_t = scan[i];
        best_i = i;
      }
    }
    const double lo = (best_i > 0) ? scan[best_i - 1] : a;
    const double hi = (best_i + 1 < scan.size()) ? scan[best_i + 1] : b;
    double x_min = best_t, f_min = best_g;
    golden_min([&](double t) { return adjacent_gap(t, s); }, lo, hi, x_min, f_min);
    GapLocation g;
    g.t = root;
    g.t_min = x_min;
    g.gap = f_min;
    g.found = true;
    out.gaps.push_back(g);
  }
  out.gap = out.gaps.back();  // the latest crossing carries the active gap
  return out;
}

TransferTrajectory unitary_transfer(const PulseSchedule& s,
                                    const Eigen::Vector3cd& initial,
                                    const OdeOptions& opts, int n_samples) {
  s.validate();
  if (std::abs(initial.norm() - 1.0) > 1e-8) {
    throw std::invalid_argument("initial amplitudes must be normalized");
  }
  n_samples = std::max(n_samples, 2);
  const double t_f = s.t_final();

  TransferTrajectory traj;
  const std::vector<double> samples = linspace(-t_f, t_f, n_samples);
  traj.t.reserve(samples.size());
  traj.psi.reserve(samples.size());
  traj.populations.reserve(samples.size());

  auto rhs = [&s](double t, const Eigen::Vector3cd& y, Eigen::Vector3cd& dydt) {
    const Eigen::Matrix3d h = rwa_hamiltonian(t, s);
    dydt = std::complex<double>(0.0, -1.0) * (h * y);
  };
  auto observer = [&traj](double t, const Eigen::Vector3cd& y, bool is_sample) {
    if (!is_sample) return;
    traj.t.push_back(t);
    traj.psi.push_back(y);
    traj.populations.emplace_back(std::norm(y[0]), std::norm(y[1]),
                                  std::norm(y[2]));
  };
  traj.stats =
      integrate_adaptive(rhs, Eigen::Vector3cd(initial), -t_f, t_f, opts,
                         samples, observer);
  return traj;
}

}  // namespace stirap
