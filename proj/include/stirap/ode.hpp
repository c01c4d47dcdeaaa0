#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "stirap/errors.hpp"

namespace stirap {

enum class OdeMethod {
  dopri5,  // Dormand-Prince 5(4), first-same-as-last, 6 evaluations per step
  dop853,  // Dormand-Prince 8(5,3), 12 evaluations per step
};

struct OdeOptions {
  double rtol = 1e-8;
  double atol = 1e-10;
  double max_step = std::numeric_limits<double>::infinity();
  double first_step = 0.0;  // 0 = choose automatically
  long max_steps = 50'000'000;
  OdeMethod method = OdeMethod::dopri5;
};

struct OdeStats {
  long n_steps = 0;     // accepted steps
  long n_rejected = 0;  // rejected trial steps
  long n_rhs = 0;       // right-hand-side evaluations
};

inline std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> out;
  if (n <= 0) return out;
  out.reserve(static_cast<size_t>(n));
  if (n == 1) {
    out.push_back(a);
    return out;
  }
  for (int i = 0; i < n; ++i) out.push_back(a + (b - a) * i / (n - 1));
  out.back() = b;
  return out;
}

namespace detail {

// Weighted RMS of a single component error against the per-component scale
// atol + rtol * max(|y|, |y1|); used by both tableaus.
template <class Vec>
double scaled_sq_sum(const Vec& err, const Vec& y0, const Vec& y1, double atol,
                     double rtol) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < err.size(); ++i) {
    const double sk =
        atol + rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    const double e = std::abs(err[i]) / sk;
    acc += e * e;
  }
  return acc;
}

}  // namespace detail

// Adaptive explicit Runge-Kutta integration of dy/dt = rhs(t, y) from t0 to
// t1 (either direction). The observer is invoked as observer(t, y, is_sample)
// at the initial point and after every accepted step; is_sample marks the
// points listed in `samples` (which must be sorted in integration direction
// and lie within [t0, t1] — steps are clipped to land on them exactly).
// Throws ToleranceNotMet when the controller underflows the step size or the
// step budget is exhausted.
template <class Vec, class Rhs, class Observer>
OdeStats integrate_adaptive(Rhs&& rhs, Vec y, double t0, double t1,
                            const OdeOptions& opt,
                            const std::vector<double>& samples,
                            Observer&& observer) {
  OdeStats stats;
  const double dir = (t1 >= t0) ? 1.0 : -1.0;
  const Eigen::Index n = y.size();

  size_t next_sample = 0;
  auto emit = [&](double t, const Vec& state) {
    bool is_sample = false;
    while (next_sample < samples.size() &&
           dir * (samples[next_sample] - t) <= 1e-12 * std::max(1.0, std::abs(t))) {
      is_sample = true;
      ++next_sample;
    }
    observer(t, state, is_sample);
  };

  double t = t0;
  Vec f0 = y;
  rhs(t, y, f0);
  ++stats.n_rhs;
  emit(t, y);
  if (t0 == t1) return stats;

  const double span = std::abs(t1 - t0);

  // Initial step size: ratio of state to slope magnitude in the scaled norm,
  // conservatively clipped; the controller corrects it within a few steps.
  double h;
  if (opt.first_step > 0.0) {
    h = opt.first_step;
  } else {
    const double d0 = std::sqrt(detail::scaled_sq_sum(y, y, y, opt.atol, opt.rtol) /
                                static_cast<double>(n));
    const double d1 = std::sqrt(detail::scaled_sq_sum(f0, y, y, opt.atol, opt.rtol) /
                                static_cast<double>(n));
    h = (d1 > 1e-300) ? 0.01 * d0 / d1 : 1e-6 * span;
    if (!(h > 0.0) || !std::isfinite(h)) h = 1e-6 * span;
    h = std::min(h, 1e-2 * span);
  }
  h = std::min(h, opt.max_step);

  const bool is853 = (opt.method == OdeMethod::dop853);
  const double err_exponent = is853 ? 1.0 / 8.0 : 1.0 / 5.0;
  const double fac_min = is853 ? 1.0 / 3.0 : 0.2;
  const double fac_max = is853 ? 6.0 : 10.0;
  const double safety = 0.9;

  Vec k1 = f0, k2 = y, k3 = y, k4 = y, k5 = y, k6 = y, k7 = y;
  Vec k8 = y, k9 = y, k10 = y, k11 = y, k12 = y;
  Vec ytmp = y, ynew = y, yerr = y, yerr2 = y;

  bool last_rejected = false;
  while (dir * (t1 - t) > 1e-14 * std::max(1.0, std::abs(t))) {
    if (stats.n_steps + stats.n_rejected >= opt.max_steps) {
      throw ToleranceNotMet("integration step budget exhausted at t = " +
                            std::to_string(t));
    }

    // Clip the trial step to the domain end and to the next sample time.
    double h_exec = std::min(h, opt.max_step);
    enum { kFree, kAtSample, kAtEnd } clip = kFree;
    double limit = dir * (t1 - t);
    int limit_kind = kAtEnd;
    if (next_sample < samples.size()) {
      const double to_sample = dir * (samples[next_sample] - t);
      if (to_sample > 0.0 && to_sample < limit) {
        limit = to_sample;
        limit_kind = kAtSample;
      }
    }
    if (h_exec >= limit) {
      h_exec = limit;
      clip = static_cast<decltype(clip)>(limit_kind);
    }
    const bool clipped = (clip != kFree);
    if (h_exec <= 1e-14 * std::max(1.0, std::abs(t))) {
      throw ToleranceNotMet("step size underflow at t = " + std::to_string(t));
    }
    const double hs = dir * h_exec;  // signed step

    double err;
    if (!is853) {
      // Dormand-Prince 5(4).
      ytmp = y + hs * (0.2 * k1);
      rhs(t + 0.2 * hs, ytmp, k2);
      ytmp = y + hs * ((3.0 / 40.0) * k1 + (9.0 / 40.0) * k2);
      rhs(t + 0.3 * hs, ytmp, k3);
      ytmp = y + hs * ((44.0 / 45.0) * k1 + (-56.0 / 15.0) * k2 + (32.0 / 9.0) * k3);
      rhs(t + 0.8 * hs, ytmp, k4);
      ytmp = y + hs * ((19372.0 / 6561.0) * k1 + (-25360.0 / 2187.0) * k2 +
                       (64448.0 / 6561.0) * k3 + (-212.0 / 729.0) * k4);
      rhs(t + (8.0 / 9.0) * hs, ytmp, k5);
      ytmp = y + hs * ((9017.0 / 3168.0) * k1 + (-355.0 / 33.0) * k2 +
                       (46732.0 / 5247.0) * k3 + (49.0 / 176.0) * k4 +
                       (-5103.0 / 18656.0) * k5);
      rhs(t + hs, ytmp, k6);
      ynew = y + hs * ((35.0 / 384.0) * k1 + (500.0 / 1113.0) * k3 +
                       (125.0 / 192.0) * k4 + (-2187.0 / 6784.0) * k5 +
                       (11.0 / 84.0) * k6);
      rhs(t + hs, ynew, k7);
      stats.n_rhs += 6;
      yerr = hs * ((71.0 / 57600.0) * k1 + (-71.0 / 16695.0) * k3 +
                   (71.0 / 1920.0) * k4 + (-17253.0 / 339200.0) * k5 +
                   (22.0 / 525.0) * k6 + (-1.0 / 40.0) * k7);
      err = std::sqrt(detail::scaled_sq_sum(yerr, y, ynew, opt.atol, opt.rtol) /
                      static_cast<double>(n));
    } else {
      // Dormand-Prince 8(5,3), coefficients by Hairer, Norsett and Wanner.
      ytmp = y + hs * (5.26001519587677318785587544488e-2 * k1);
      rhs(t + 0.526001519587677318785587544488e-01 * hs, ytmp, k2);
      ytmp = y + hs * (1.97250569845378994544595329183e-2 * k1 +
                       5.91751709536136983633785987549e-2 * k2);
      rhs(t + 0.789002279381515978178381316732e-01 * hs, ytmp, k3);
      ytmp = y + hs * (2.95875854768068491816892993775e-2 * k1 +
                       8.87627564304205475450678981324e-2 * k3);
      rhs(t + 0.118350341907227396726757197510e+00 * hs, ytmp, k4);
      ytmp = y + hs * (2.41365134159266685502369798665e-1 * k1 +
                       -8.84549479328286085344864962717e-1 * k3 +
                       9.24834003261792003115737966543e-1 * k4);
      rhs(t + 0.281649658092772603273242802490e+00 * hs, ytmp, k5);
      ytmp = y + hs * (3.7037037037037037037037037037e-2 * k1 +
                       1.70828608729473871279604482173e-1 * k4 +
                       1.25467687566822425016691814123e-1 * k5);
      rhs(t + (1.0 / 3.0) * hs, ytmp, k6);
      ytmp = y + hs * (3.7109375e-2 * k1 + 1.70252211019544039314978060272e-1 * k4 +
                       6.02165389804559606850219397283e-2 * k5 + -1.7578125e-2 * k6);
      rhs(t + 0.25 * hs, ytmp, k7);
      ytmp = y + hs * (3.70920001185047927108779319836e-2 * k1 +
                       1.70383925712239993810214054705e-1 * k4 +
                       1.07262030446373284651809199168e-1 * k5 +
                       -1.53194377486244017527936158236e-2 * k6 +
                       8.27378916381402288758473766002e-3 * k7);
      rhs(t + 0.307692307692307692307692307692e+00 * hs, ytmp, k8);
      ytmp = y + hs * (6.24110958716075717114429577812e-1 * k1 +
                       -3.36089262944694129406857109825e0 * k4 +
                       -8.68219346841726006818189891453e-1 * k5 +
                       2.75920996994467083049415600797e1 * k6 +
                       2.01540675504778934086186788979e1 * k7 +
                       -4.34898841810699588477366255144e1 * k8);
      rhs(t + 0.651282051282051282051282051282e+00 * hs, ytmp, k9);
      ytmp = y + hs * (4.77662536438264365890433908527e-1 * k1 +
                       -2.48811461997166764192642586468e0 * k4 +
                       -5.90290826836842996371446475743e-1 * k5 +
                       2.12300514481811942347288949897e1 * k6 +
                       1.52792336328824235832596922938e1 * k7 +
                       -3.32882109689848629194453265587e1 * k8 +
                       -2.03312017085086261358222928593e-2 * k9);
      rhs(t + 0.6 * hs, ytmp, k10);
      ytmp = y + hs * (-9.3714243008598732571704021658e-1 * k1 +
                       5.18637242884406370830023853209e0 * k4 +
                       1.09143734899672957818500254654e0 * k5 +
                       -8.14978701074692612513997267357e0 * k6 +
                       -1.85200656599969598641566180701e1 * k7 +
                       2.27394870993505042818970056734e1 * k8 +
                       2.49360555267965238987089396762e0 * k9 +
                       -3.0467644718982195003823669022e0 * k10);
      rhs(t + 0.857142857142857142857142857142e+00 * hs, ytmp, k11);
      ytmp = y + hs * (2.27331014751653820792359768449e0 * k1 +
                       -1.05344954667372501984066689879e1 * k4 +
                       -2.00087205822486249909675718444e0 * k5 +
                       -1.79589318631187989172765950534e1 * k6 +
                       2.79488845294199600508499808837e1 * k7 +
                       -2.85899827713502369474065508674e0 * k8 +
                       -8.87285693353062954433549289258e0 * k9 +
                       1.23605671757943030647266201528e1 * k10 +
                       6.43392746015763530355970484046e-1 * k11);
      rhs(t + hs, ytmp, k12);
      stats.n_rhs += 11;
      // k4 slot below: the 8th-order slope combination.
      ytmp = 5.42937341165687622380535766363e-2 * k1 +
             4.45031289275240888144113950566e0 * k6 +
             1.89151789931450038304281599044e0 * k7 +
             -5.8012039600105847814672114227e0 * k8 +
             3.1116436695781989440891606237e-1 * k9 +
             -1.52160949662516078556178806805e-1 * k10 +
             2.01365400804030348374776537501e-1 * k11 +
             4.47106157277725905176885569043e-2 * k12;
      ynew = y + hs * ytmp;
      yerr2 = ytmp - 0.244094488188976377952755905512e+00 * k1 -
              0.733846688281611857341361741547e+00 * k9 -
              0.220588235294117647058823529412e-01 * k12;
      yerr = 0.1312004499419488073250102996e-01 * k1 +
             -0.1225156446376204440720569753e+01 * k6 +
             -0.4957589496572501915214079952e+00 * k7 +
             0.1664377182454986536961530415e+01 * k8 +
             -0.3503288487499736816886487290e+00 * k9 +
             0.3341791187130174790297318841e+00 * k10 +
             0.8192320648511571246570742613e-01 * k11 +
             -0.2235530786388629525884427845e-01 * k12;
      const double err5 =
          detail::scaled_sq_sum(yerr, y, ynew, opt.atol, opt.rtol);
      const double err3 =
          detail::scaled_sq_sum(yerr2, y, ynew, opt.atol, opt.rtol);
      double deno = err5 + 0.01 * err3;
      if (deno <= 0.0) deno = 1.0;
      err = h_exec * err5 / std::sqrt(static_cast<double>(n) * deno);
    }

    if (!std::isfinite(err)) err = 1e10;

    if (err <= 1.0) {
      // Snap to the clip target to avoid floating-point drift.
      if (clip == kAtEnd) {
        t = t1;
      } else if (clip == kAtSample) {
        t = samples[next_sample];
      } else {
        t += hs;
      }
      y = ynew;
      ++stats.n_steps;
      if (!is853) {
        k1 = k7;  // first-same-as-last
      } else {
        rhs(t, y, k1);
        ++stats.n_rhs;
      }
      emit(t, y);
      double fac = safety * std::pow(err, -err_exponent);
      if (err == 0.0) fac = fac_max;
      fac = std::clamp(fac, fac_min, fac_max);
      if (last_rejected) fac = std::min(fac, 1.0);
      // A step shortened only to land on a sample must not inflate the
      // controller's step estimate.
      if (!clipped) {
        h = h_exec * fac;
      } else if (fac < 1.0) {
        h = std::min(h, h_exec * fac);
      }
      h = std::min(h, opt.max_step);
      last_rejected = false;
    } else {
      ++stats.n_rejected;
      const double fac =
          std::max(fac_min, safety * std::pow(err, -err_exponent));
      h = h_exec * fac;
      last_rejected = true;
    }
  }
  return stats;
}

}  // namespace stirap
