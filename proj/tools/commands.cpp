#include "commands.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <thread>
#include <vector>

#include <json.hpp>

#include "stirap/fock.hpp"
#include "stirap/spectral.hpp"

namespace stirap::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

// ---------------------------------------------------------------- plumbing

void ensure_outdir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec)
    throw ConfigError("cannot create output directory '" + dir + "': " + ec.message());
}

// Deterministic CSV writer: UTF-8, LF line ends, '.' decimal separator,
// 17 significant digits; NaN renders as an empty field.
class Csv {
 public:
  explicit Csv(const fs::path& path) : path_(path.string()) {
    f_ = std::fopen(path_.c_str(), "wb");
    if (!f_) throw ConfigError("cannot open output file '" + path_ + "'");
  }
  ~Csv() {
    if (f_) std::fclose(f_);
  }
  Csv(const Csv&) = delete;
  Csv& operator=(const Csv&) = delete;

  void text(const std::string& s) {
    sep();
    if (s.find_first_of(",\"\n") == std::string::npos) {
      std::fputs(s.c_str(), f_);
    } else {
      std::fputc('"', f_);
      for (char c : s) {
        if (c == '"') std::fputc('"', f_);
        std::fputc(c, f_);
      }
      std::fputc('"', f_);
    }
  }
  void num(double x) {
    sep();
    if (std::isnan(x)) return;  // empty field
    std::fprintf(f_, "%.17g", x);
  }
  void intval(long n) {
    sep();
    std::fprintf(f_, "%ld", n);
  }
  void end_row() {
    std::fputc('\n', f_);
    first_ = true;
  }
  const std::string& path() const { return path_; }

 private:
  void sep() {
    if (!first_) std::fputc(',', f_);
    first_ = false;
  }
  std::string path_;
  FILE* f_ = nullptr;
  bool first_ = true;
};

std::string iso_utc_now() {
  std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

ordered_json system_json(const SystemParams& p) {
  ordered_json j{{"omega_b", p.omega_b}, {"kappa_a", p.kappa_a},
                 {"kappa_c", p.kappa_c}, {"kappa_b", p.kappa_b},
                 {"g_ca", p.g_ca},       {"nbar_a", p.nbar_a},
                 {"nbar_c", p.nbar_c},   {"nbar_b", p.nbar_b}};
  if (p.kappa_b > 0.0) j["Q_b"] = p.Q_b();
  return j;
}

ordered_json schedule_json(const PulseSchedule& s) {
  return {{"Omega0", s.Omega0},           {"t_c", s.t_c},
          {"T", s.T},                     {"kappa_delta", s.kappa_delta},
          {"h_delta", s.h_delta},         {"tau", s.tau},
          {"tau_ch", s.tau_ch},           {"g_ca", s.g_ca()},
          {"t_final", s.t_final()}};
}

ordered_json window_json(const TruncationWindow& w) {
  return {{"t_start", w.t_start}, {"t_end", w.t_end}, {"n_cycles", w.n_cycles}};
}

ordered_json run_json(const RunSettings& r) {
  ordered_json j{{"rwa", !r.opts.counter_rotating},
                 {"rtol", r.opts.ode.rtol},
                 {"atol", r.opts.ode.atol},
                 {"samples", r.opts.n_samples},
                 {"hold", r.hold_time},
                 {"jobs", r.jobs},
                 {"full_moments", r.full_moments}};
  if (std::isfinite(r.opts.ode.max_step)) j["max_step"] = r.opts.ode.max_step;
  if (r.cycles) j["cycles"] = *r.cycles;
  return j;
}

ordered_json stats_json(const OdeStats& st) {
  return {{"steps", st.n_steps}, {"rejected", st.n_rejected}, {"rhs_evals", st.n_rhs}};
}

ordered_json overrides_json(const Overrides& ov) {
  ordered_json j = ordered_json::object();
  if (ov.rwa) j["rwa"] = *ov.rwa;
  if (ov.cycles) j["cycles"] = *ov.cycles;
  if (ov.window) j["window"] = {ov.window->first, ov.window->second};
  if (ov.tol) j["tol"] = {ov.tol->first, ov.tol->second};
  if (ov.jobs) j["jobs"] = *ov.jobs;
  if (ov.full_moments) j["full_moments"] = true;
  return j;
}

// The manifest carries every resolved parameter; the timestamp is appended
// last so data files stay byte-identical across reruns while the manifest
// records when they were made.
void write_manifest(const std::string& out_dir, ordered_json j) {
  j["generated_at"] = iso_utc_now();
  fs::path p = fs::path(out_dir) / "manifest.json";
  std::ofstream out(p, std::ios::binary);
  if (!out) throw ConfigError("cannot open output file '" + p.string() + "'");
  out << j.dump(2) << "\n";
}

ordered_json base_manifest(const char* command, const GlobalArgs& args) {
  ordered_json j;
  j["command"] = command;
  j["config"] = args.config_path;
  j["out_dir"] = args.out_dir;
  j["overrides"] = overrides_json(args.ov);
  return j;
}

// ------------------------------------------------- trajectory CSV columns

const char* const kMomentNames[12] = {"ada",  "cdc",  "bdb", "adc",
                                      "adb",  "cdb",  "cb",  "adcd",
                                      "adbd", "bb",   "cdcd", "adad"};

void traj_header(Csv& csv, bool full_moments) {
  for (const char* col : {"t", "t_shifted", "N_a", "N_c", "N_b", "re_ac",
                          "im_ac", "re_cb", "im_cb", "re_cb_anom", "im_cb_anom"})
    csv.text(col);
  if (full_moments) {
    for (const char* name : kMomentNames) {
      csv.text(std::string("re_") + name);
      csv.text(std::string("im_") + name);
    }
  }
  csv.end_row();
}

void traj_row(Csv& csv, double t, double t_shifted, const MomentState& st,
              const Occupancies& occ, bool full_moments) {
  csv.num(t);
  csv.num(t_shifted);
  csv.num(occ.N_a);
  csv.num(occ.N_c);
  csv.num(occ.N_b);
  csv.num(st.m[MomentState::kAdC].real());
  csv.num(st.m[MomentState::kAdC].imag());
  csv.num(st.m[MomentState::kCdB].real());
  csv.num(st.m[MomentState::kCdB].imag());
  csv.num(st.m[MomentState::kCB].real());
  csv.num(st.m[MomentState::kCB].imag());
  if (full_moments) {
    for (int p = 0; p < 12; ++p) {
      csv.num(st.m[p].real());
      csv.num(st.m[p].imag());
    }
  }
  csv.end_row();
}

void write_trajectory_csv(const fs::path& path, const Trajectory& traj,
                          bool full_moments) {
  Csv csv(path);
  traj_header(csv, full_moments);
  double t0 = traj.t.empty() ? 0.0 : traj.t.front();
  for (size_t i = 0; i < traj.t.size(); ++i)
    traj_row(csv, traj.t[i], traj.t[i] - t0, traj.states[i], traj.occ[i],
             full_moments);
}

// Window resolution shared by cool/tune/sweep: an explicit window wins;
// otherwise the located avoided crossing defines it.
TruncationWindow resolve_window(const PulseSchedule& s, const RunSettings& run) {
  TruncationWindow w;
  if (run.window) {
    w = *run.window;
  } else {
    AdiabaticSpectrum spec = find_crossings_and_gap(s);
    w = default_window(s, spec.gap);
  }
  if (run.cycles) w.n_cycles = *run.cycles;
  w.validate();
  return w;
}

}  // namespace

// ------------------------------------------------------------- subcommands

int cmd_transfer(const GlobalArgs& args) {
  Config cfg = Config::parse_file(args.config_path);
  PulseSchedule sched = schedule_from(cfg);
  RunSettings run = run_from(cfg, args.ov);
  ensure_outdir(args.out_dir);

  OdeOptions opts = unitary_transfer_defaults();
  if (run.tol_explicit) {
    opts.rtol = run.opts.ode.rtol;
    opts.atol = run.opts.ode.atol;
  }
  Eigen::Vector3cd initial(1.0, 0.0, 0.0);  // single excitation in b
  TransferTrajectory traj =
      unitary_transfer(sched, initial, opts, run.opts.n_samples);

  fs::path csv_path = fs::path(args.out_dir) / "transfer.csv";
  {
    Csv csv(csv_path);
    for (const char* col : {"t", "t_shifted", "omega_p", "delta_s", "delta_c",
                            "delta_a", "N_a", "N_c", "N_b", "norm"})
      csv.text(col);
    csv.end_row();
    double t0 = traj.t.front();
    for (size_t i = 0; i < traj.t.size(); ++i) {
      Detunings d = detunings(traj.t[i], sched);
      csv.num(traj.t[i]);
      csv.num(traj.t[i] - t0);
      csv.num(omega_p(traj.t[i], sched));
      csv.num(delta_s(traj.t[i], sched));
      csv.num(d.delta_c);
      csv.num(d.delta_a);
      csv.num(traj.populations[i][2]);
      csv.num(traj.populations[i][1]);
      csv.num(traj.populations[i][0]);
      csv.num(traj.populations[i].sum());
      csv.end_row();
    }
  }

  double norm_drift = 0.0;
  for (const auto& pop : traj.populations)
    norm_drift = std::max(norm_drift, std::abs(pop.sum() - 1.0));

  ordered_json j = base_manifest("transfer", args);
  j["schedule"] = schedule_json(sched);
  j["run"] = {{"rtol", opts.rtol}, {"atol", opts.atol},
              {"samples", run.opts.n_samples}};
  j["results"] = {{"final_N_a", traj.populations.back()[2]},
                  {"final_N_c", traj.populations.back()[1]},
                  {"final_N_b", traj.populations.back()[0]},
                  {"norm_drift", norm_drift},
                  {"stats", stats_json(traj.stats)}};
  j["outputs"] = {"transfer.csv"};
  write_manifest(args.out_dir, j);
  return 0;
}

int cmd_cool(const GlobalArgs& args) {
  Config cfg = Config::parse_file(args.config_path);
  PulseSchedule sched = schedule_from(cfg);
  SystemParams params = system_from(cfg);
  MomentState initial = initial_from(cfg);
  RunSettings run = run_from(cfg, args.ov);
  ensure_outdir(args.out_dir);

  bool iterated = run.window.has_value() || run.cycles.has_value();
  ordered_json j = base_manifest("cool", args);
  j["schedule"] = schedule_json(sched);
  j["system"] = system_json(params);
  j["initial"] = {{"N_a", initial.m[MomentState::kNa].real()},
                  {"N_c", initial.m[MomentState::kNc].real()},
                  {"N_b", initial.m[MomentState::kNb].real()}};
  j["run"] = run_json(run);

  fs::path csv_path = fs::path(args.out_dir) / "trajectory.csv";
  if (!iterated) {
    Trajectory traj = integrate(initial, sched, params, -sched.t_final(),
                                sched.t_final(), run.opts);
    write_trajectory_csv(csv_path, traj, run.full_moments);
    j["mode"] = "full";
    j["results"] = {{"N_b_min", traj.min_Nb},
                    {"t_min", traj.t_min_Nb},
                    {"final_N_b", traj.occ.back().N_b},
                    {"stats", stats_json(traj.stats)}};
  } else {
    TruncationWindow window = resolve_window(sched, run);
    auto [traj, report] =
        iterate_cooling(initial, sched, window, params, run.opts, run.hold_time);
    write_trajectory_csv(csv_path, traj, run.full_moments);
    j["mode"] = "iterated";
    j["window"] = window_json(window);
    j["results"] = {{"initial_N_b", report.initial_Nb},
                    {"N_b_min", report.N_b_min},
                    {"t_min", report.t_min},
                    {"cycle_end_N_b", report.cycle_end_Nb},
                    {"final_N_b", report.final_Nb},
                    {"n_cycles", report.n_cycles},
                    {"stats", stats_json(report.stats)}};
  }
  j["outputs"] = {"trajectory.csv"};
  write_manifest(args.out_dir, j);
  return 0;
}

int cmd_spectrum(const GlobalArgs& args) {
  Config cfg = Config::parse_file(args.config_path);
  PulseSchedule sched = schedule_from(cfg);
  RunSettings run = run_from(cfg, args.ov);
  ensure_outdir(args.out_dir);

  AdiabaticSpectrum spec = find_crossings_and_gap(sched, run.resolution);

  fs::path csv_path = fs::path(args.out_dir) / "spectrum.csv";
  {
    Csv csv(csv_path);
    for (const char* col : {"t", "t_shifted", "lam_Sminus", "lam_S0",
                            "lam_Splus", "S_minus", "S0", "S_plus", "omega_p"})
      csv.text(col);
    csv.end_row();
    double t0 = spec.t.front();
    for (size_t i = 0; i < spec.t.size(); ++i) {
      csv.num(spec.t[i]);
      csv.num(spec.t[i] - t0);
      csv.num(spec.lambda[i][0]);
      csv.num(spec.lambda[i][1]);
      csv.num(spec.lambda[i][2]);
      csv.num(spec.stokes[i].S_minus);
      csv.num(spec.stokes[i].S0);
      csv.num(spec.stokes[i].S_plus);
      csv.num(omega_p(spec.t[i], sched));
      csv.end_row();
    }
  }

  ordered_json gaps = ordered_json::array();
  for (const auto& g : spec.gaps)
    gaps.push_back({{"t", g.t}, {"t_min", g.t_min}, {"gap", g.gap}});
  TruncationWindow window = default_window(sched, spec.gap);

  ordered_json j = base_manifest("spectrum", args);
  j["schedule"] = schedule_json(sched);
  j["run"] = {{"resolution", run.resolution}};
  j["results"] = {{"s_plus_crossings", spec.s_plus_crossings},
                  {"s_minus_crossings", spec.s_minus_crossings},
                  {"gaps", gaps},
                  {"gap", {{"t", spec.gap.t},
                           {"t_min", spec.gap.t_min},
                           {"gap", spec.gap.gap}}},
                  {"default_window", window_json(window)}};
  j["outputs"] = {"spectrum.csv"};
  write_manifest(args.out_dir, j);
  return 0;
}

int cmd_compare(const GlobalArgs& args) {
  Config cfg = Config::parse_file(args.config_path);
  SystemParams base = system_from(cfg);
  RunSettings run = run_from(cfg, args.ov);
  CompareSettings cs = compare_from(cfg, base, run);
  ensure_outdir(args.out_dir);

  std::vector<CompareRow> rows =
      compare(cs.scenarios, run.opts, run.jobs, cs.analytic_only);

  fs::path csv_path = fs::path(args.out_dir) / "compare.csv";
  {
    Csv csv(csv_path);
    for (const char* col :
         {"name", "G", "kappa_c", "kappa_a", "Q_b", "t_start", "t_end",
          "cycles", "stability", "N_min_NC", "first_term", "second_term",
          "cooperativity", "low_cooperativity", "N_min_SC", "final_N_b",
          "error"})
      csv.text(col);
    csv.end_row();
    for (size_t i = 0; i < rows.size(); ++i) {
      const CompareRow& r = rows[i];
      const CompareScenario& sc = cs.scenarios[i];
      csv.text(r.name);
      csv.num(sc.G);
      csv.num(sc.params.kappa_c);
      csv.num(sc.params.kappa_a);
      csv.num(sc.params.Q_b());
      csv.num(sc.window.t_start);
      csv.num(sc.window.t_end);
      csv.intval(sc.window.n_cycles);
      csv.text(r.stable ? "stable" : "unstable");
      if (r.stable)
        csv.num(r.n_limit);
      else
        csv.text("unstable");
      csv.num(r.first_term);
      csv.num(r.second_term);
      csv.num(r.cooperativity);
      csv.intval(r.low_cooperativity ? 1 : 0);
      csv.num(r.N_min_SC);
      csv.num(r.final_Nb);
      csv.text(r.error);
      csv.end_row();
    }
  }

  ordered_json summary = ordered_json::array();
  int n_failed = 0;
  for (const auto& r : rows) {
    ordered_json row{{"name", r.name}, {"stable", r.stable}};
    if (r.stable) row["N_min_NC"] = r.n_limit;
    if (std::isfinite(r.N_min_SC)) row["N_min_SC"] = r.N_min_SC;
    if (!r.error.empty()) {
      row["error"] = r.error;
      ++n_failed;
    }
    summary.push_back(std::move(row));
  }

  ordered_json j = base_manifest("compare", args);
  j["system"] = system_json(base);
  j["run"] = run_json(run);
  j["analytic_only"] = cs.analytic_only;
  j["results"] = {{"n_rows", rows.size()},
                  {"n_failed", n_failed},
                  {"rows", summary}};
  j["outputs"] = {"compare.csv"};
  write_manifest(args.out_dir, j);
  return 0;  // per-row errors are recorded, not fatal
}

int cmd_oracle_check(const GlobalArgs& args) {
  Config cfg = Config::parse_file(args.config_path);
  PulseSchedule sched = schedule_from(cfg);
  SystemParams params = system_from(cfg);
  MomentState requested = initial_from(cfg);
  RunSettings run = run_from(cfg, args.ov);
  OracleSettings os = oracle_from(cfg);
  ensure_outdir(args.out_dir);

  FockConfig f{os.n_max_a, os.n_max_c, os.n_max_b};
  f.validate();
  double t0 = -sched.t_final(), t1 = sched.t_final();
  if (os.t_span) {
    t0 = os.t_span->first;
    t1 = os.t_span->second;
  }

  FockOperators ops = make_operators(f);
  Eigen::MatrixXcd rho0 =
      thermal_state(f, requested.m[MomentState::kNa].real(),
                    requested.m[MomentState::kNc].real(),
                    requested.m[MomentState::kNb].real());

  OracleOptions oo;
  oo.ode.rtol = os.fock_rtol;
  oo.ode.atol = os.fock_atol;
  oo.n_samples = os.samples;
  oo.counter_rotating = run.opts.counter_rotating;
  oo.leak_tol = os.leak_tol;
  OracleTrajectory fock = evolve_density(rho0, sched, params, f, t0, t1, oo);

  // The moment run starts from the truncated state's actual moments, not
  // the nominal occupancies, so the two solvers share an initial condition.
  MomentState m0;
  m0.m = moments_of(rho0, ops);
  m0.t = t0;
  IntegrateOptions io = run.opts;
  if (!run.tol_explicit) {
    io.ode.rtol = os.moments_rtol;
    io.ode.atol = os.moments_atol;
  }
  io.n_samples = os.samples;
  Trajectory mom = integrate(m0, sched, params, t0, t1, io);

  // Relative error per moment, normalized by that moment's peak magnitude
  // over the oracle trajectory (floored to keep zero channels finite).
  Eigen::Array<double, 12, 1> ref = Eigen::Array<double, 12, 1>::Zero();
  for (const auto& m : fock.moments)
    ref = ref.max(m.array().abs());
  ref = ref.max(1e-9);

  double worst = 0.0;
  fs::path csv_path = fs::path(args.out_dir) / "oracle_check.csv";
  {
    Csv csv(csv_path);
    for (const char* col : {"t", "max_rel_err", "top_leak"})
      csv.text(col);
    csv.end_row();
    for (size_t i = 0; i < fock.t.size(); ++i) {
      Eigen::Array<double, 12, 1> err =
          (fock.moments[i] - mom.states[i].m).array().abs() / ref;
      double e = err.maxCoeff();
      worst = std::max(worst, e);
      csv.num(fock.t[i]);
      csv.num(e);
      csv.num(fock.top_leak[i]);
      csv.end_row();
    }
  }

  bool pass = worst <= os.rel_tol;
  ordered_json j = base_manifest("oracle-check", args);
  j["schedule"] = schedule_json(sched);
  j["system"] = system_json(params);
  j["initial"] = {{"N_a", m0.m[MomentState::kNa].real()},
                  {"N_c", m0.m[MomentState::kNc].real()},
                  {"N_b", m0.m[MomentState::kNb].real()}};
  j["oracle"] = {{"n_max_a", f.n_max_a},
                 {"n_max_c", f.n_max_c},
                 {"n_max_b", f.n_max_b},
                 {"dim", f.dim()},
                 {"samples", os.samples},
                 {"span", {t0, t1}},
                 {"rwa", !oo.counter_rotating},
                 {"fock_rtol", oo.ode.rtol},
                 {"fock_atol", oo.ode.atol},
                 {"moments_rtol", io.ode.rtol},
                 {"moments_atol", io.ode.atol},
                 {"leak_tol", os.leak_tol},
                 {"rel_tol", os.rel_tol}};
  j["results"] = {{"worst_rel_err", worst},
                  {"max_leak", fock.max_leak},
                  {"pass", pass},
                  {"fock_stats", stats_json(fock.stats)},
                  {"moments_stats", stats_json(mom.stats)}};
  j["outputs"] = {"oracle_check.csv"};
  write_manifest(args.out_dir, j);

  if (!pass) {
    ordered_json rec{{"error",
                      {{"code", "ToleranceNotMet"},
                       {"message", "oracle check failed: worst relative error " +
                                       std::to_string(worst) + " exceeds " +
                                       std::to_string(os.rel_tol)}}}};
    std::fprintf(stderr, "%s\n", rec.dump().c_str());
    return 1;
  }
  return 0;
}

int cmd_tune(const GlobalArgs& args) {
  Config cfg = Config::parse_file(args.config_path);
  PulseSchedule sched = schedule_from(cfg);
  SystemParams params = system_from(cfg);
  MomentState initial = initial_from(cfg);
  RunSettings run = run_from(cfg, args.ov);
  ensure_outdir(args.out_dir);

  TruncationWindow seed_window = resolve_window(sched, run);
  TuneSpec spec = tune_from(cfg, sched, seed_window, initial);
  TuneResult result = tune(spec, params, run.opts);

  fs::path csv_path = fs::path(args.out_dir) / "tune_log.csv";
  {
    Csv csv(csv_path);
    csv.text("eval");
    for (const auto& p : spec.params) csv.text(p.name);
    csv.text("objective");
    csv.text("best_so_far");
    csv.end_row();
    double best = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < result.log.size(); ++i) {
      best = std::min(best, result.log[i].objective);
      csv.intval(long(i));
      for (double v : result.log[i].values) csv.num(v);
      csv.num(result.log[i].objective);
      csv.num(best);
      csv.end_row();
    }
  }

  ordered_json best_params = ordered_json::object();
  if (!result.log.empty()) {
    // Recover the best row (tune() returns the realized schedule; the log
    // keeps natural-unit parameter values for audit).
    size_t ibest = 0;
    for (size_t i = 1; i < result.log.size(); ++i)
      if (result.log[i].objective < result.log[ibest].objective) ibest = i;
    for (size_t k = 0; k < spec.params.size(); ++k)
      best_params[spec.params[k].name] = result.log[ibest].values[k];
  }

  ordered_json j = base_manifest("tune", args);
  j["system"] = system_json(params);
  j["seed_schedule"] = schedule_json(spec.seed);
  j["seed_window"] = window_json(spec.seed_window);
  j["run"] = run_json(run);
  j["tune"] = {{"budget", spec.budget}, {"initial_N_b", spec.initial_Nb}};
  j["results"] = {{"objective", result.objective},
                  {"best_params", best_params},
                  {"schedule", schedule_json(result.schedule)},
                  {"window", window_json(result.window)},
                  {"n_evals", result.log.size()},
                  {"budget_exhausted", result.budget_exhausted}};
  j["outputs"] = {"tune_log.csv"};
  write_manifest(args.out_dir, j);
  return 0;
}

int cmd_sweep(const GlobalArgs& args) {
  Config cfg = Config::parse_file(args.config_path);
  PulseSchedule base_sched = schedule_from(cfg);
  SystemParams params = system_from(cfg);
  MomentState initial = initial_from(cfg);
  RunSettings run = run_from(cfg, args.ov);
  SweepSettings sw = sweep_from(cfg);
  ensure_outdir(args.out_dir);

  bool window_axes = false;
  for (const auto& ax : sw.axes)
    if (ax.name == "t_start" || ax.name == "t_end") window_axes = true;
  bool iterated = run.window.has_value() || run.cycles.has_value() || window_axes;

  std::vector<std::vector<double>> grids;
  for (const auto& ax : sw.axes)
    grids.push_back(ax.count == 1 ? std::vector<double>{ax.lo}
                                  : linspace(ax.lo, ax.hi, ax.count));
  size_t n1 = grids[0].size();
  size_t n2 = grids.size() == 2 ? grids[1].size() : 1;
  size_t total = n1 * n2;

  struct Point {
    std::vector<double> values;
    double N_b_min = std::numeric_limits<double>::quiet_NaN();
    double t_min = std::numeric_limits<double>::quiet_NaN();
    double final_Nb = std::numeric_limits<double>::quiet_NaN();
    std::string error;
  };
  std::vector<Point> points(total);

  auto run_point = [&](size_t idx) {
    Point& pt = points[idx];
    size_t i1 = idx / n2, i2 = idx % n2;
    pt.values.push_back(grids[0][i1]);
    if (grids.size() == 2) pt.values.push_back(grids[1][i2]);
    try {
      PulseSchedule s = base_sched;
      TruncationWindow scratch;
      // Omega0 rebuilds the schedule family, so it lands first; the other
      // schedule axes adjust individual fields afterwards.
      for (size_t k = 0; k < sw.axes.size(); ++k)
        if (sw.axes[k].name == "Omega0")
          apply_sweep_param("Omega0", pt.values[k], cfg, s, scratch);
      for (size_t k = 0; k < sw.axes.size(); ++k) {
        const std::string& nm = sw.axes[k].name;
        if (nm != "Omega0" && nm != "t_start" && nm != "t_end")
          apply_sweep_param(nm, pt.values[k], cfg, s, scratch);
      }
      s.validate();
      if (iterated) {
        TruncationWindow w = resolve_window(s, run);
        for (size_t k = 0; k < sw.axes.size(); ++k)
          if (sw.axes[k].name == "t_start" || sw.axes[k].name == "t_end")
            apply_sweep_param(sw.axes[k].name, pt.values[k], cfg, s, w);
        w.validate();
        auto [traj, report] =
            iterate_cooling(initial, s, w, params, run.opts, run.hold_time);
        (void)traj;
        pt.N_b_min = report.N_b_min;
        pt.t_min = report.t_min;
        pt.final_Nb = report.final_Nb;
      } else {
        Trajectory traj = integrate(initial, s, params, -s.t_final(),
                                    s.t_final(), run.opts);
        pt.N_b_min = traj.min_Nb;
        pt.t_min = traj.t_min_Nb;
        pt.final_Nb = traj.occ.back().N_b;
      }
    } catch (const std::exception& e) {
      pt.error = e.what();
    }
  };

  int jobs = std::min<size_t>(run.jobs, total);
  if (jobs <= 1) {
    for (size_t i = 0; i < total; ++i) run_point(i);
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < jobs; ++w)
      pool.emplace_back([&] {
        for (size_t i = next.fetch_add(1); i < total; i = next.fetch_add(1))
          run_point(i);
      });
    for (auto& th : pool) th.join();
  }

  // Single collector: rows land in grid order regardless of worker timing.
  fs::path csv_path = fs::path(args.out_dir) / "sweep.csv";
  int n_failed = 0;
  {
    Csv csv(csv_path);
    for (const auto& ax : sw.axes) csv.text(ax.name);
    for (const char* col : {"N_b_min", "t_min", "final_N_b", "error"})
      csv.text(col);
    csv.end_row();
    for (const auto& pt : points) {
      for (double v : pt.values) csv.num(v);
      csv.num(pt.N_b_min);
      csv.num(pt.t_min);
      csv.num(pt.final_Nb);
      csv.text(pt.error);
      csv.end_row();
      if (!pt.error.empty()) ++n_failed;
    }
  }

  ordered_json axes = ordered_json::array();
  for (const auto& ax : sw.axes)
    axes.push_back({{"name", ax.name}, {"lo", ax.lo}, {"hi", ax.hi},
                    {"count", ax.count}});
  ordered_json j = base_manifest("sweep", args);
  j["schedule"] = schedule_json(base_sched);
  j["system"] = system_json(params);
  j["initial"] = {{"N_a", initial.m[MomentState::kNa].real()},
                  {"N_c", initial.m[MomentState::kNc].real()},
                  {"N_b", initial.m[MomentState::kNb].real()}};
  j["run"] = run_json(run);
  j["mode"] = iterated ? "iterated" : "full";
  j["results"] = {{"axes", axes},
                  {"n_points", total},
                  {"n_failed", n_failed}};
  j["outputs"] = {"sweep.csv"};
  write_manifest(args.out_dir, j);

  if (n_failed > 0) {
    ordered_json rec{{"error",
                      {{"code", "SweepPointFailed"},
                       {"message", std::to_string(n_failed) + " of " +
                                       std::to_string(total) +
                                       " sweep points failed; partial results "
                                       "kept in sweep.csv"}}}};
    std::fprintf(stderr, "%s\n", rec.dump().c_str());
    return 1;
  }
  return 0;
}

int run_command(const GlobalArgs& args) {
  if (args.command == "transfer") return cmd_transfer(args);
  if (args.command == "cool") return cmd_cool(args);
  if (args.command == "spectrum") return cmd_spectrum(args);
  if (args.command == "compare") return cmd_compare(args);
  if (args.command == "oracle-check") return cmd_oracle_check(args);
  if (args.command == "tune") return cmd_tune(args);
  if (args.command == "sweep") return cmd_sweep(args);
  throw ConfigError("unknown command '" + args.command + "'");
}

}  // namespace stirap::cli
