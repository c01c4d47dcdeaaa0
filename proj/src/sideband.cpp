#include "stirap/sideband.hpp"

#include <atomic>
#include <exception>
#include <thread>

#include "stirap/errors.hpp"

namespace stirap {

bool stability(double G, const SystemParams& p) {
  return G * G <
         0.25 * p.omega_b * p.omega_b + p.kappa_c * p.kappa_c / 16.0;
}

SidebandVerdict cooling_limit(double G, const SystemParams& p) {
  p.validate();
  if (!stability(G, p)) {
    throw Unstable("sideband cooling unstable at G = " + std::to_string(G));
  }
  const double G2 = G * G;
  const double wb2 = p.omega_b * p.omega_b;
  const double kc = p.kappa_c;
  const double kb = p.kappa_b;
  SidebandVerdict v;
  v.stable = true;
  v.first_term =
      (4.0 * G2 + kc * kc) / (4.0 * G2 * (kc + kb)) * kb * p.nbar_b;
  v.second_term =
      ((4.0 * wb2 - kc * kc) * (8.0 * G2 + kc * kc) + 2.0 * std::pow(kc, 4)) /
      (16.0 * wb2 * (4.0 * wb2 + kc * kc - 16.0 * G2));
  v.n_limit = v.first_term + v.second_term;
  v.cooperativity = (kb > 0.0 && kc > 0.0)
                        ? 4.0 * G2 / (kb * kc)
                        : std::numeric_limits<double>::infinity();
  v.low_cooperativity = v.cooperativity < 10.0;
  return v;
}

std::vector<CompareRow> compare(const std::vector<CompareScenario>& scenarios,
                                const IntegrateOptions& opts, int jobs,
                                bool analytic_only) {
  std::vector<CompareRow> rows(scenarios.size());

  auto run_row = [&](size_t i) {
    const CompareScenario& sc = scenarios[i];
    CompareRow& row = rows[i];
    row.name = sc.name;
    try {
      row.stable = stability(sc.G, sc.params);
      if (row.stable) {
        const SidebandVerdict v = cooling_limit(sc.G, sc.params);
        row.n_limit = v.n_limit;
        row.first_term = v.first_term;
        row.second_term = v.second_term;
        row.cooperativity = v.cooperativity;
        row.low_cooperativity = v.low_cooperativity;
      }
      if (!analytic_only) {
        IntegrateOptions io = opts;
        io.counter_rotating = sc.counter_rotating;
        const auto [traj, report] =
            iterate_cooling(sc.initial, sc.schedule, sc.window, sc.params, io);
        row.N_min_SC = report.N_b_min;
        row.final_Nb = report.final_Nb;
      }
    } catch (const std::exception& e) {
      row.error = e.what();
    }
  };

  jobs = std::max(jobs, 1);
  if (jobs == 1 || scenarios.size() <= 1) {
    for (size_t i = 0; i < scenarios.size(); ++i) run_row(i);
    return rows;
  }

  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next.fetch_add(1); i < scenarios.size();
         i = next.fetch_add(1)) {
      run_row(i);
    }
  };
  std::vector<std::thread> pool;
  const size_t n_threads =
      std::min(static_cast<size_t>(jobs), scenarios.size());
  pool.reserve(n_threads);
  for (size_t k = 0; k < n_threads; ++k) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  return rows;
}

}  // namespace stirap
