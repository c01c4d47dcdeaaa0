#include <doctest.h>

#include <cmath>
#include <vector>

#include "stirap/model.hpp"
#include "stirap/sideband.hpp"

using namespace stirap;

namespace {

SystemParams sideband_params(double kappa_c, double Q_b, double kappa_a = 0.01) {
  SystemParams p;
  p.kappa_c = kappa_c;
  p.kappa_a = kappa_a;
  p.set_Q_b(Q_b);
  p.nbar_b = 1000.0;
  return p;
}

}  // namespace

TEST_CASE("stability boundary follows the Routh-Hurwitz condition") {
  CHECK(stability(0.5, sideband_params(0.2, 1e5)));       // 0.25 < 0.2525
  CHECK(!stability(0.6, sideband_params(0.3, 1e5)));      // 0.36 > 0.2556
  CHECK(stability(0.0, sideband_params(0.2, 1e5)));
  // The inequality is strict; probe one ulp either side of the boundary
  // (the boundary value itself lands on either side after rounding).
  const double bound = std::sqrt(0.25 + 0.2 * 0.2 / 16.0);
  CHECK(!stability(std::nextafter(bound, 1.0), sideband_params(0.2, 1e5)));
  CHECK(stability(std::nextafter(bound, 0.0), sideband_params(0.2, 1e5)));
}

TEST_CASE("cooling limit reproduces every stable published row to 0.01") {
  struct Row {
    double G, kappa_c, Q_b, expect;
  };
  const Row rows[] = {
      {0.02, 0.05, 1e5, 0.51},  {0.02, 0.05, 1e7, 0.005},
      {0.1, 0.1, 1e5, 0.13},    {0.1, 0.1, 1e7, 0.0070},
      {0.3, 0.1, 1e5, 0.173},   {0.3, 0.1, 1e7, 0.071},
      {0.5, 0.2, 1e5, 12.679},  {0.5, 0.2, 1e7, 12.628},
      {0.2, 4.0, 1e5, 1.273},   {0.2, 4.0, 1e7, 1.023},
      {0.5, 10.0, 1e5, 6.480},  {0.5, 10.0, 1e7, 6.381},
  };
  for (const Row& r : rows) {
    SidebandVerdict v = cooling_limit(r.G, sideband_params(r.kappa_c, r.Q_b));
    CAPTURE(r.G);
    CAPTURE(r.kappa_c);
    CAPTURE(r.Q_b);
    CHECK(v.stable);
    CHECK(std::abs(v.n_limit - r.expect) <= 0.01);
    CHECK(v.n_limit == doctest::Approx(v.first_term + v.second_term).epsilon(1e-12));
    CHECK(!v.low_cooperativity);
  }
}

TEST_CASE("cooling limit throws on the unstable published rows") {
  const double unstable_G[] = {0.6, 0.9, 1.2, 1.5};
  const double unstable_kc[] = {0.3, 0.5, 0.5, 0.5};
  for (int i = 0; i < 4; ++i) {
    SystemParams p = sideband_params(unstable_kc[i], 1e7);
    CHECK(!stability(unstable_G[i], p));
    CHECK_THROWS_AS(cooling_limit(unstable_G[i], p), Unstable);
  }
}

TEST_CASE("cooling limit is monotone in the bath occupation") {
  SystemParams p = sideband_params(0.2, 1e5);
  double prev = -1.0;
  for (double nbar : {0.0, 1.0, 10.0, 100.0, 1000.0, 10000.0}) {
    p.nbar_b = nbar;
    SidebandVerdict v = cooling_limit(0.5, p);
    CHECK(v.n_limit > prev);
    prev = v.n_limit;
  }
}

TEST_CASE("second term diverges approaching the stability boundary") {
  SystemParams p = sideband_params(0.2, 1e5);
  const double bound_sq = 0.25 + 0.2 * 0.2 / 16.0;
  SidebandVerdict near = cooling_limit(std::sqrt(bound_sq - 1e-8), p);
  CHECK(near.second_term > 1e4);
  SidebandVerdict far = cooling_limit(0.4, p);
  CHECK(near.second_term > 100.0 * far.second_term);
}

TEST_CASE("first term saturates at kappa_b nbar_b / (kappa_c + kappa_b)") {
  SystemParams p = sideband_params(0.2, 1e5);
  const double asymptote = p.kappa_b * p.nbar_b / (p.kappa_c + p.kappa_b);
  SidebandVerdict v = cooling_limit(0.5, p);
  // (4G^2 + kappa_c^2) / 4G^2 = 1.04 at G = 0.5, kappa_c = 0.2.
  CHECK(v.first_term == doctest::Approx(1.04 * asymptote).epsilon(1e-12));
  SidebandVerdict weaker = cooling_limit(0.3, p);
  CHECK(std::abs(v.first_term - asymptote) <
        std::abs(weaker.first_term - asymptote));
}

TEST_CASE("low cooperativity is flagged but not fatal") {
  SystemParams p;
  p.kappa_c = 0.5;
  p.kappa_a = 0.01;
  p.kappa_b = 0.01;
  p.nbar_b = 10.0;
  SidebandVerdict v = cooling_limit(0.001, p);
  CHECK(v.cooperativity < 10.0);
  CHECK(v.low_cooperativity);
  CHECK(std::isfinite(v.n_limit));
}

TEST_CASE("compare: empty scenario list gives an empty table") {
  CHECK(compare({}).empty());
}

TEST_CASE("compare: single stable scenario fills both columns") {
  CompareScenario sc;
  sc.name = "G0.5_kc0.2";
  sc.G = 0.5;
  sc.params = sideband_params(0.2, 1e7, 2.0);
  sc.schedule = canonical_schedule(0.5);
  sc.window.t_start = 100.0;
  sc.window.t_end = 115.0;
  sc.window.n_cycles = 10;
  sc.initial = MomentState::thermal(0, 0, 1000.0);

  std::vector<CompareRow> rows = compare({sc});
  REQUIRE(rows.size() == 1);
  const CompareRow& r = rows[0];
  CHECK(r.name == "G0.5_kc0.2");
  CHECK(r.stable);
  CHECK(std::abs(r.n_limit - 12.628) <= 0.01);
  CHECK(std::isfinite(r.N_min_SC));
  CHECK(r.N_min_SC >= 0.0);
  CHECK(r.N_min_SC < 1000.0);
  CHECK(std::isfinite(r.final_Nb));
  CHECK(r.error.empty());
}

TEST_CASE("compare: unstable rows still simulate, analytic column marked") {
  CompareScenario sc;
  sc.name = "G0.9_kc0.5";
  sc.G = 0.9;
  sc.params = sideband_params(0.5, 1e7, 2.0);
  sc.schedule = canonical_schedule(0.9);
  sc.window.t_start = 50.0;
  sc.window.t_end = 90.0;
  sc.window.n_cycles = 10;
  sc.initial = MomentState::thermal(0, 0, 1000.0);

  std::vector<CompareRow> rows = compare({sc});
  REQUIRE(rows.size() == 1);
  CHECK(!rows[0].stable);
  CHECK(std::isnan(rows[0].n_limit));
  CHECK(std::isfinite(rows[0].N_min_SC));
  CHECK(rows[0].error.empty());
}

TEST_CASE("compare: per-row failures are recorded, not thrown") {
  CompareScenario ok;
  ok.name = "fine";
  ok.G = 0.5;
  ok.params = sideband_params(0.2, 1e7, 2.0);
  ok.schedule = canonical_schedule(0.5);
  ok.window.t_start = 100.0;
  ok.window.t_end = 115.0;
  ok.initial = MomentState::thermal(0, 0, 1000.0);

  CompareScenario broken = ok;
  broken.name = "bad_window";
  broken.window.t_start = 115.0;
  broken.window.t_end = 100.0;

  std::vector<CompareRow> rows = compare({ok, broken});
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].error.empty());
  CHECK(!rows[1].error.empty());
  CHECK(std::isnan(rows[1].N_min_SC));
  // The analytic columns do not depend on the window.
  CHECK(std::abs(rows[1].n_limit - rows[0].n_limit) < 1e-12);
}

TEST_CASE("compare: worker-pool result is independent of the job count") {
  std::vector<CompareScenario> scenarios;
  for (double G : {0.3, 0.5}) {
    CompareScenario sc;
    sc.name = "G" + std::to_string(G);
    sc.G = G;
    sc.params = sideband_params(G == 0.3 ? 0.1 : 0.2, 1e5, 2.0);
    sc.schedule = canonical_schedule(G);
    sc.window.t_start = G == 0.3 ? 150.0 : 100.0;
    sc.window.t_end = G == 0.3 ? 186.0 : 115.0;
    sc.initial = MomentState::thermal(0, 0, 1000.0);
    scenarios.push_back(sc);
  }
  std::vector<CompareRow> serial = compare(scenarios, {}, 1);
  std::vector<CompareRow> parallel = compare(scenarios, {}, 4);
  REQUIRE(serial.size() == parallel.size());
  for (size_t i = 0; i < serial.size(); ++i) {
    CHECK(serial[i].name == parallel[i].name);
    CHECK(serial[i].N_min_SC == parallel[i].N_min_SC);
    CHECK(serial[i].n_limit == parallel[i].n_limit);
  }

  std::vector<CompareRow> analytic = compare(scenarios, {}, 1, true);
  REQUIRE(analytic.size() == serial.size());
  for (size_t i = 0; i < analytic.size(); ++i) {
    CHECK(std::isnan(analytic[i].N_min_SC));
    CHECK(analytic[i].n_limit == serial[i].n_limit);
  }
}
