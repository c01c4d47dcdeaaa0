#include "stirap/tuner.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "stirap/errors.hpp"

namespace stirap {

namespace {

double fold_into(double v, double lo, double hi) {
  if (!(hi > lo)) return lo;
  const double w = hi - lo;
  double y = std::fmod(v - lo, 2.0 * w);
  if (y < 0.0) y += 2.0 * w;
  return lo + (y <= w ? y : 2.0 * w - y);
}

Eigen::VectorXd fold_point(Eigen::VectorXd x, const Eigen::VectorXd& lo,
                           const Eigen::VectorXd& hi) {
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    x[i] = fold_into(x[i], lo[i], hi[i]);
  }
  return x;
}

}  // namespace

NelderMeadResult nelder_mead(
    const std::function<double(const Eigen::VectorXd&)>& objective,
    const Eigen::VectorXd& x0, const Eigen::VectorXd& lo,
    const Eigen::VectorXd& hi, const NelderMeadOptions& opts) {
  const Eigen::Index n = x0.size();
  if (n == 0 || lo.size() != n || hi.size() != n) {
    throw ConfigError("nelder_mead requires matching nonempty bounds");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(std::isfinite(lo[i]) && std::isfinite(hi[i]) && lo[i] < hi[i])) {
      throw ConfigError("nelder_mead bounds must be finite with lo < hi");
    }
  }

  NelderMeadResult res;
  res.budget_exhausted = false;
  long evals_left = std::max(opts.max_evals, 1L);
  auto eval = [&](const Eigen::VectorXd& x) {
    --evals_left;
    ++res.n_evals;
    return objective(x);
  };

  Eigen::VectorXd best = fold_point(x0, lo, hi);
  double f_best = eval(best);

  const Eigen::VectorXd box = hi - lo;
  double step_scale = opts.init_step;

  for (int restart = 0; restart <= opts.max_restarts && evals_left > 0;
       ++restart) {
    // Simplex around the incumbent; steps shrink on every restart.
    std::vector<Eigen::VectorXd> xs(static_cast<size_t>(n) + 1, best);
    std::vector<double> fs(static_cast<size_t>(n) + 1, f_best);
    for (Eigen::Index i = 0; i < n && evals_left > 0; ++i) {
      double step = step_scale * box[i];
      if (best[i] + step > hi[i]) step = -step;
      Eigen::VectorXd xi = best;
      xi[i] = fold_into(best[i] + step, lo[i], hi[i]);
      xs[static_cast<size_t>(i) + 1] = xi;
      fs[static_cast<size_t>(i) + 1] = eval(xi);
    }

    std::vector<size_t> order(xs.size());
    auto sort_simplex = [&] {
      std::iota(order.begin(), order.end(), size_t{0});
      std::stable_sort(order.begin(), order.end(),
                       [&](size_t a, size_t b) { return fs[a] < fs[b]; });
    };
    sort_simplex();

    while (evals_left > 0) {
      const size_t i_best = order.front();
      const size_t i_worst = order.back();
      const size_t i_second = order[order.size() - 2];

      const double spread = fs[i_worst] - fs[i_best];
      double diameter = 0.0;
      for (size_t k = 1; k < order.size(); ++k) {
        diameter = std::max(
            diameter, ((xs[order[k]] - xs[i_best]).cwiseQuotient(box))
                          .cwiseAbs()
                          .maxCoeff());
      }
      if (spread <= opts.f_tol * std::max(1.0, std::abs(fs[i_best])) &&
          diameter <= opts.x_tol) {
        break;
      }

      Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
      for (size_t k = 0; k + 1 < order.size(); ++k) centroid += xs[order[k]];
      centroid /= double(n);

      auto try_point = [&](double coeff) {
        Eigen::VectorXd x =
            fold_point(centroid + coeff * (xs[i_worst] - centroid), lo, hi);
        const double f = eval(x);
        return std::make_pair(std::move(x), f);
      };

      auto [xr, fr] = try_point(-1.0);  // reflection
      if (fr < fs[i_best]) {
        if (evals_left > 0) {
          auto [xe, fe] = try_point(-2.0);  // expansion
          if (fe < fr) {
            xs[i_worst] = xe;
            fs[i_worst] = fe;
          } else {
            xs[i_worst] = xr;
            fs[i_worst] = fr;
          }
        } else {
          xs[i_worst] = xr;
          fs[i_worst] = fr;
        }
      } else if (fr < fs[i_second]) {
        xs[i_worst] = xr;
        fs[i_worst] = fr;
      } else if (evals_left > 0) {
        const bool outside = fr < fs[i_worst];
        auto [xc, fc] = try_point(outside ? -0.5 : 0.5);  // contraction
        if (fc < std::min(fr, fs[i_worst])) {
          xs[i_worst] = xc;
          fs[i_worst] = fc;
        } else {
          // Shrink toward the best vertex.
          for (size_t k = 1; k < order.size() && evals_left > 0; ++k) {
            const size_t idx = order[k];
            xs[idx] = fold_point(
                xs[i_best] + 0.5 * (xs[idx] - xs[i_best]), lo, hi);
            fs[idx] = eval(xs[idx]);
          }
        }
      } else {
        break;
      }
      sort_simplex();
    }

    sort_simplex();
    if (fs[order.front()] < f_best) {
      f_best = fs[order.front()];
      best = xs[order.front()];
    }
    step_scale *= 0.5;
  }

  res.x = best;
  res.f = f_best;
  res.budget_exhausted = (evals_left <= 0);
  return res;
}

namespace {

constexpr const char* kTunable[] = {"kappa_delta", "h_delta", "tau",
                                    "tau_ch",      "t_c",     "T",
                                    "t_start",     "t_end"};

bool is_time_like(const std::string& name) {
  return name != "kappa_delta" && name != "h_delta";
}

void apply_param(const std::string& name, double value, PulseSchedule& s,
                 TruncationWindow& w) {
  if (name == "kappa_delta") {
    s.kappa_delta = value;
  } else if (name == "h_delta") {
    s.h_delta = value;
  } else if (name == "tau") {
    s.tau = value;
  } else if (name == "tau_ch") {
    s.tau_ch = value;
  } else if (name == "t_c") {
    s.t_c = value;
  } else if (name == "T") {
    s.T = value;
  } else if (name == "t_start") {
    w.t_start = value;
  } else if (name == "t_end") {
    w.t_end = value;
  }
}

}  // namespace

void TuneSpec::validate() const {
  if (params.empty()) throw ConfigError("tune requires at least one parameter");
  if (budget < 1) throw ConfigError("tune budget must be >= 1");
  std::set<std::string> seen;
  for (const auto& prm : params) {
    const auto* begin = std::begin(kTunable);
    const auto* end = std::end(kTunable);
    if (std::find(begin, end, prm.name) == end) {
      throw ConfigError("unknown tunable parameter: " + prm.name);
    }
    if (!seen.insert(prm.name).second) {
      throw ConfigError("duplicate tunable parameter: " + prm.name);
    }
    if (!(std::isfinite(prm.lo) && std::isfinite(prm.hi) && prm.lo < prm.hi)) {
      throw ConfigError("bounds for " + prm.name +
                        " must be finite with lo < hi");
    }
  }
  seed.validate();
  seed_window.validate();
  if (!(initial_Nb >= 0.0)) throw ConfigError("initial_Nb must be >= 0");
}

TuneResult tune(const TuneSpec& spec, const SystemParams& p,
                const IntegrateOptions& opts) {
  spec.validate();
  p.validate();
  const size_t n = spec.params.size();
  const double scale_t = spec.seed.Omega0;  // time-like coords searched
                                            // as products with Omega0
  Eigen::VectorXd x0(n), lo(n), hi(n);
  for (size_t i = 0; i < n; ++i) {
    const TuneParam& prm = spec.params[i];
    const double fac = is_time_like(prm.name) ? scale_t : 1.0;
    lo[static_cast<Eigen::Index>(i)] = prm.lo * fac;
    hi[static_cast<Eigen::Index>(i)] = prm.hi * fac;
    PulseSchedule tmp = spec.seed;
    TruncationWindow tmpw = spec.seed_window;
    double seed_value = 0.0;
    if (prm.name == "kappa_delta") seed_value = tmp.kappa_delta;
    else if (prm.name == "h_delta") seed_value = tmp.h_delta;
    else if (prm.name == "tau") seed_value = tmp.tau;
    else if (prm.name == "tau_ch") seed_value = tmp.tau_ch;
    else if (prm.name == "t_c") seed_value = tmp.t_c;
    else if (prm.name == "T") seed_value = tmp.T;
    else if (prm.name == "t_start") seed_value = tmpw.t_start;
    else seed_value = tmpw.t_end;
    x0[static_cast<Eigen::Index>(i)] =
        std::clamp(seed_value * fac, lo[static_cast<Eigen::Index>(i)],
                   hi[static_cast<Eigen::Index>(i)]);
  }

  TuneResult result;
  const MomentState initial = MomentState::thermal(0.0, 0.0, spec.initial_Nb);
  constexpr double kPenalty = 1e9;

  auto realize = [&](const Eigen::VectorXd& x, PulseSchedule& s,
                     TruncationWindow& w) {
    s = spec.seed;
    w = spec.seed_window;
    for (size_t i = 0; i < n; ++i) {
      const TuneParam& prm = spec.params[i];
      const double fac = is_time_like(prm.name) ? scale_t : 1.0;
      apply_param(prm.name, x[static_cast<Eigen::Index>(i)] / fac, s, w);
    }
  };

  auto objective = [&](const Eigen::VectorXd& x) -> double {
    PulseSchedule s;
    TruncationWindow w;
    realize(x, s, w);
    TuneEval entry;
    entry.values.resize(n);
    for (size_t i = 0; i < n; ++i) {
      const double fac = is_time_like(spec.params[i].name) ? scale_t : 1.0;
      entry.values[i] = x[static_cast<Eigen::Index>(i)] / fac;
    }
    double f = kPenalty;
    try {
      s.validate();
      w.validate();
      const auto [traj, report] = iterate_cooling(initial, s, w, p, opts);
      f = report.N_b_min;
    } catch (const Error&) {
      f = kPenalty;
    }
    entry.objective = f;
    result.log.push_back(std::move(entry));
    return f;
  };

  NelderMeadOptions nm;
  nm.max_evals = spec.budget;
  const NelderMeadResult best = nelder_mead(objective, x0, lo, hi, nm);
  realize(best.x, result.schedule, result.window);
  result.objective = best.f;
  result.budget_exhausted = best.budget_exhausted;
  return result;
}

}  // namespace stirap
