#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stirap/errors.hpp"
#include "stirap/evolve.hpp"
#include "stirap/model.hpp"
#include "stirap/moments.hpp"
#include "stirap/pulses.hpp"
#include "stirap/sideband.hpp"
#include "stirap/tuner.hpp"

namespace stirap::cli {

// One `key = value` line; the raw value keeps everything after the '=' with
// comments and surrounding whitespace stripped.
struct ConfigEntry {
  std::string key;
  std::string value;
  int line = 0;
};

struct ConfigSection {
  std::string name;
  std::string origin;  // file path, for error messages
  int line = 0;
  std::vector<ConfigEntry> entries;

  bool has(const std::string& key) const;
  // Last occurrence wins for scalar keys; repeated keys (e.g. `row`) are
  // retrieved with all().
  const ConfigEntry* maybe(const std::string& key) const;
  std::vector<const ConfigEntry*> all(const std::string& key) const;

  double number(const std::string& key) const;
  double number(const std::string& key, double fallback) const;
  long integer(const std::string& key) const;
  long integer(const std::string& key, long fallback) const;
  bool boolean(const std::string& key, bool fallback) const;
  std::string text(const std::string& key, const std::string& fallback) const;
  // Comma-separated list of numbers, e.g. `window = 50, 90`.
  std::vector<double> numbers(const std::string& key) const;

  // Throws ConfigError naming the first key not in `allowed` (typo guard).
  void allow_only(const std::vector<std::string>& allowed) const;
};

// Flat TOML-style config: `[section]` headers over `key = value` lines,
// `#` comments, repeated keys allowed within a section.
class Config {
 public:
  static Config parse_file(const std::string& path);
  static Config parse_string(const std::string& text,
                             const std::string& origin = "<string>");

  const std::string& path() const { return path_; }
  const ConfigSection* find(const std::string& name) const;
  const ConfigSection& require(const std::string& name) const;
  const std::vector<ConfigSection>& sections() const { return sections_; }

 private:
  std::string path_;
  std::vector<ConfigSection> sections_;
};

// Flag overrides layered on top of the config.
struct Overrides {
  std::optional<bool> rwa;
  std::optional<int> cycles;
  std::optional<std::pair<double, double>> window;
  std::optional<std::pair<double, double>> tol;  // rel, abs
  std::optional<int> jobs;
  bool full_moments = false;
};

// Resolved [run] settings (with overrides applied).
struct RunSettings {
  IntegrateOptions opts;
  std::optional<TruncationWindow> window;
  std::optional<int> cycles;
  double hold_time = 0.0;
  int resolution = 2000;  // spectrum sampling
  bool full_moments = false;
  int jobs = 1;
  bool tol_explicit = false;  // rtol/atol came from config or --tol
};

// [compare] rows realized into scenarios.
struct CompareSettings {
  std::vector<CompareScenario> scenarios;
  bool analytic_only = false;
};

// [oracle] settings for the moments-vs-Fock check.
struct OracleSettings {
  int n_max_a = 3;
  int n_max_c = 3;
  int n_max_b = 3;
  int samples = 101;
  double leak_tol = 1e-4;
  double rel_tol = 1e-3;
  double fock_rtol = 1e-9;
  double fock_atol = 1e-12;
  double moments_rtol = 1e-10;
  double moments_atol = 1e-13;
  std::optional<std::pair<double, double>> t_span;
};

// One sweep axis: `param = name, lo, hi, count`.
struct SweepAxis {
  std::string name;
  double lo = 0.0;
  double hi = 0.0;
  int count = 0;
};

struct SweepSettings {
  std::vector<SweepAxis> axes;  // one or two
};

SystemParams system_from(const Config& c);
PulseSchedule schedule_from(const Config& c);
MomentState initial_from(const Config& c);
RunSettings run_from(const Config& c, const Overrides& ov);
CompareSettings compare_from(const Config& c, const SystemParams& base,
                             const RunSettings& run);
TuneSpec tune_from(const Config& c, const PulseSchedule& seed,
                   const TruncationWindow& seed_window,
                   const MomentState& initial);
OracleSettings oracle_from(const Config& c);
SweepSettings sweep_from(const Config& c);

// Applies one named schedule/window parameter (tuner names plus Omega0);
// Omega0 rebuilds the canonical family before re-applying explicit
// [schedule] overrides, which `sched_keys` lists.
void apply_sweep_param(const std::string& name, double value,
                       const Config& c, PulseSchedule& s,
                       TruncationWindow& w);

}  // namespace stirap::cli
