#include "config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace stirap::cli {

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Strips a trailing `# comment`, ignoring '#' inside double quotes.
std::string strip_comment(const std::string& s) {
  bool quoted = false;
  for (size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"') quoted = !quoted;
    if (s[i] == '#' && !quoted) return s.substr(0, i);
  }
  return s;
}

std::string unquote(const std::string& s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"')
    return s.substr(1, s.size() - 2);
  return s;
}

// Splits on commas outside quotes; fields are trimmed, quotes kept.
std::vector<std::string> split_fields(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (char ch : s) {
    if (ch == '"') quoted = !quoted;
    if (ch == ',' && !quoted) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  out.push_back(trim(cur));
  return out;
}

[[noreturn]] void fail(const std::string& origin, int line, const std::string& what) {
  std::ostringstream os;
  os << origin << ":" << line << ": " << what;
  throw ConfigError(os.str());
}

double parse_number(const std::string& raw, const std::string& origin, int line,
                    const std::string& key) {
  const std::string v = trim(raw);
  char* end = nullptr;
  double x = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size())
    fail(origin, line, "key '" + key + "': cannot parse '" + v + "' as a number");
  return x;
}

long parse_integer(const std::string& raw, const std::string& origin, int line,
                   const std::string& key) {
  double x = parse_number(raw, origin, line, key);
  long n = std::lround(x);
  if (x != double(n))
    fail(origin, line, "key '" + key + "': '" + trim(raw) + "' is not an integer");
  return n;
}

}  // namespace

bool ConfigSection::has(const std::string& key) const {
  return maybe(key) != nullptr;
}

const ConfigEntry* ConfigSection::maybe(const std::string& key) const {
  const ConfigEntry* found = nullptr;
  for (const auto& e : entries)
    if (e.key == key) found = &e;
  return found;
}

std::vector<const ConfigEntry*> ConfigSection::all(const std::string& key) const {
  std::vector<const ConfigEntry*> out;
  for (const auto& e : entries)
    if (e.key == key) out.push_back(&e);
  return out;
}

double ConfigSection::number(const std::string& key) const {
  const ConfigEntry* e = maybe(key);
  if (!e)
    throw ConfigError(origin + ": [" + name + "] is missing required key '" + key + "'");
  return parse_number(e->value, origin, e->line, key);
}

double ConfigSection::number(const std::string& key, double fallback) const {
  const ConfigEntry* e = maybe(key);
  return e ? parse_number(e->value, origin, e->line, key) : fallback;
}

long ConfigSection::integer(const std::string& key) const {
  const ConfigEntry* e = maybe(key);
  if (!e)
    throw ConfigError(origin + ": [" + name + "] is missing required key '" + key + "'");
  return parse_integer(e->value, origin, e->line, key);
}

long ConfigSection::integer(const std::string& key, long fallback) const {
  const ConfigEntry* e = maybe(key);
  return e ? parse_integer(e->value, origin, e->line, key) : fallback;
}

bool ConfigSection::boolean(const std::string& key, bool fallback) const {
  const ConfigEntry* e = maybe(key);
  if (!e) return fallback;
  std::string v = unquote(trim(e->value));
  std::transform(v.begin(), v.end(), v.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
  if (v == "false" || v == "no" || v == "off" || v == "0") return false;
  fail(origin, e->line, "key '" + key + "': cannot parse '" + e->value + "' as a boolean");
}

std::string ConfigSection::text(const std::string& key,
                                const std::string& fallback) const {
  const ConfigEntry* e = maybe(key);
  return e ? unquote(trim(e->value)) : fallback;
}

std::vector<double> ConfigSection::numbers(const std::string& key) const {
  const ConfigEntry* e = maybe(key);
  if (!e)
    throw ConfigError(origin + ": [" + name + "] is missing required key '" + key + "'");
  std::vector<double> out;
  for (const auto& f : split_fields(e->value))
    out.push_back(parse_number(f, origin, e->line, key));
  return out;
}

void ConfigSection::allow_only(const std::vector<std::string>& allowed) const {
  for (const auto& e : entries) {
    if (std::find(allowed.begin(), allowed.end(), e.key) == allowed.end())
      fail(origin, e.line, "unknown key '" + e.key + "' in section [" + name + "]");
  }
}

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_string(buf.str(), path);
}

Config Config::parse_string(const std::string& text, const std::string& origin) {
  Config c;
  c.path_ = origin;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  ConfigSection* current = nullptr;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        fail(origin, lineno, "malformed section header '" + line + "'");
      std::string name = trim(line.substr(1, line.size() - 2));
      if (name.empty()) fail(origin, lineno, "empty section name");
      for (const auto& s : c.sections_)
        if (s.name == name)
          fail(origin, lineno, "duplicate section [" + name + "]");
      c.sections_.push_back({name, origin, lineno, {}});
      current = &c.sections_.back();
      continue;
    }
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      fail(origin, lineno, "expected 'key = value' or '[section]', got '" + line + "'");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) fail(origin, lineno, "empty key");
    if (!current)
      fail(origin, lineno, "key '" + key + "' appears before any [section] header");
    current->entries.push_back({key, value, lineno});
  }
  return c;
}

const ConfigSection* Config::find(const std::string& name) const {
  for (const auto& s : sections_)
    if (s.name == name) return &s;
  return nullptr;
}

const ConfigSection& Config::require(const std::string& name) const {
  const ConfigSection* s = find(name);
  if (!s)
    throw ConfigError(path_ + ": missing required section [" + name + "]");
  return *s;
}

SystemParams system_from(const Config& c) {
  SystemParams p;
  const ConfigSection* s = c.find("system");
  if (!s) return p;
  s->allow_only({"omega_b", "kappa_a", "kappa_c", "kappa_b", "Q_b", "g_ca",
                 "nbar_a", "nbar_c", "nbar_b"});
  p.omega_b = s->number("omega_b", p.omega_b);
  p.kappa_a = s->number("kappa_a", p.kappa_a);
  p.kappa_c = s->number("kappa_c", p.kappa_c);
  p.g_ca = s->number("g_ca", p.g_ca);
  p.nbar_a = s->number("nbar_a", p.nbar_a);
  p.nbar_c = s->number("nbar_c", p.nbar_c);
  p.nbar_b = s->number("nbar_b", p.nbar_b);
  if (s->has("kappa_b") && s->has("Q_b"))
    throw ConfigError(c.path() + ": [system] sets both kappa_b and Q_b; give one");
  if (s->has("kappa_b"))
    p.kappa_b = s->number("kappa_b");
  else if (s->has("Q_b"))
    p.set_Q_b(s->number("Q_b"));
  p.validate();
  return p;
}

PulseSchedule schedule_from(const Config& c) {
  const ConfigSection& s = c.require("schedule");
  s.allow_only({"Omega0", "t_c", "T", "kappa_delta", "h_delta", "tau", "tau_ch"});
  PulseSchedule sched = canonical_schedule(s.number("Omega0"));
  sched.t_c = s.number("t_c", sched.t_c);
  sched.T = s.number("T", sched.T);
  sched.kappa_delta = s.number("kappa_delta", sched.kappa_delta);
  sched.h_delta = s.number("h_delta", sched.h_delta);
  sched.tau = s.number("tau", sched.tau);
  sched.tau_ch = s.number("tau_ch", sched.tau_ch);
  sched.validate();
  return sched;
}

MomentState initial_from(const Config& c) {
  double na = 0.0, nc = 0.0, nb = 0.0;
  if (const ConfigSection* s = c.find("initial")) {
    s->allow_only({"N_a", "N_c", "N_b"});
    na = s->number("N_a", 0.0);
    nc = s->number("N_c", 0.0);
    nb = s->number("N_b", 0.0);
  }
  if (na < 0.0 || nc < 0.0 || nb < 0.0)
    throw ConfigError(c.path() + ": [initial] occupancies must be >= 0");
  return MomentState::thermal(na, nc, nb);
}

RunSettings run_from(const Config& c, const Overrides& ov) {
  RunSettings r;
  const ConfigSection* s = c.find("run");
  if (s) {
    s->allow_only({"rwa", "samples", "rtol", "atol", "max_step", "cycles",
                   "window", "hold", "full_moments", "jobs", "resolution"});
    r.opts.counter_rotating = !s->boolean("rwa", false);
    r.opts.n_samples = int(s->integer("samples", r.opts.n_samples));
    if (s->has("rtol") || s->has("atol")) r.tol_explicit = true;
    r.opts.ode.rtol = s->number("rtol", r.opts.ode.rtol);
    r.opts.ode.atol = s->number("atol", r.opts.ode.atol);
    r.opts.ode.max_step = s->number("max_step", r.opts.ode.max_step);
    if (s->has("cycles")) r.cycles = int(s->integer("cycles"));
    if (s->has("window")) {
      std::vector<double> w = s->numbers("window");
      if (w.size() != 2)
        throw ConfigError(c.path() + ": [run] window needs two values 't_start, t_end'");
      r.window = TruncationWindow{w[0], w[1], 10};
    }
    r.hold_time = s->number("hold", 0.0);
    r.resolution = int(s->integer("resolution", r.resolution));
    r.full_moments = s->boolean("full_moments", false);
    r.jobs = int(s->integer("jobs", 1));
  }
  if (ov.rwa) r.opts.counter_rotating = !*ov.rwa;
  if (ov.cycles) r.cycles = *ov.cycles;
  if (ov.window) r.window = TruncationWindow{ov.window->first, ov.window->second, 10};
  if (ov.tol) {
    r.opts.ode.rtol = ov.tol->first;
    r.opts.ode.atol = ov.tol->second;
    r.tol_explicit = true;
  }
  if (ov.jobs) r.jobs = *ov.jobs;
  if (ov.full_moments) r.full_moments = true;
  if (!(r.opts.ode.rtol > 0.0) || !(r.opts.ode.atol > 0.0))
    throw ConfigError(c.path() + ": tolerances must be > 0");
  if (r.window && !(r.window->t_start < r.window->t_end))
    throw ConfigError(c.path() + ": window requires t_start < t_end");
  if (r.cycles && *r.cycles < 1)
    throw ConfigError(c.path() + ": cycles must be >= 1");
  if (r.jobs < 1)
    throw ConfigError(c.path() + ": jobs must be >= 1");
  if (r.window && r.cycles) r.window->n_cycles = *r.cycles;
  return r;
}

CompareSettings compare_from(const Config& c, const SystemParams& base,
                             const RunSettings& run) {
  const ConfigSection& s = c.require("compare");
  s.allow_only({"analytic_only", "row"});
  CompareSettings out;
  out.analytic_only = s.boolean("analytic_only", false);
  for (const ConfigEntry* e : s.all("row")) {
    std::vector<std::string> f = split_fields(e->value);
    if (f.size() != 7 && f.size() != 8)
      fail(s.origin, e->line,
           "row needs 'name, G, kappa_c, kappa_a, Q_b, t_start, t_end[, cycles]'");
    CompareScenario sc;
    sc.name = unquote(f[0]);
    sc.G = parse_number(f[1], s.origin, e->line, "row.G");
    sc.params = base;
    sc.params.kappa_c = parse_number(f[2], s.origin, e->line, "row.kappa_c");
    sc.params.kappa_a = parse_number(f[3], s.origin, e->line, "row.kappa_a");
    sc.params.set_Q_b(parse_number(f[4], s.origin, e->line, "row.Q_b"));
    sc.params.validate();
    double t0 = parse_number(f[5], s.origin, e->line, "row.t_start");
    double t1 = parse_number(f[6], s.origin, e->line, "row.t_end");
    int cycles = run.cycles.value_or(10);
    if (f.size() == 8)
      cycles = int(parse_integer(f[7], s.origin, e->line, "row.cycles"));
    sc.window = TruncationWindow{t0, t1, cycles};
    sc.window.validate();
    sc.schedule = canonical_schedule(sc.G);
    sc.initial = MomentState::thermal(0.0, 0.0, base.nbar_b);
    sc.counter_rotating = run.opts.counter_rotating;
    out.scenarios.push_back(std::move(sc));
  }
  return out;
}

TuneSpec tune_from(const Config& c, const PulseSchedule& seed,
                   const TruncationWindow& seed_window,
                   const MomentState& initial) {
  const ConfigSection& s = c.require("tune");
  s.allow_only({"budget", "initial_Nb", "param"});
  TuneSpec spec;
  spec.seed = seed;
  spec.seed_window = seed_window;
  spec.budget = s.integer("budget", spec.budget);
  spec.initial_Nb = s.number("initial_Nb", initial.m[MomentState::kNb].real());
  for (const ConfigEntry* e : s.all("param")) {
    std::vector<std::string> f = split_fields(e->value);
    if (f.size() != 3)
      fail(s.origin, e->line, "param needs 'name, lo, hi'");
    TuneParam p;
    p.name = unquote(f[0]);
    p.lo = parse_number(f[1], s.origin, e->line, "param.lo");
    p.hi = parse_number(f[2], s.origin, e->line, "param.hi");
    spec.params.push_back(std::move(p));
  }
  if (spec.params.empty())
    throw ConfigError(c.path() + ": [tune] lists no 'param' entries");
  return spec;
}

OracleSettings oracle_from(const Config& c) {
  OracleSettings o;
  const ConfigSection* s = c.find("oracle");
  if (!s) return o;
  s->allow_only({"n_max_a", "n_max_c", "n_max_b", "samples", "leak_tol",
                 "rel_tol", "fock_rtol", "fock_atol", "moments_rtol",
                 "moments_atol", "span"});
  o.n_max_a = int(s->integer("n_max_a", o.n_max_a));
  o.n_max_c = int(s->integer("n_max_c", o.n_max_c));
  o.n_max_b = int(s->integer("n_max_b", o.n_max_b));
  o.samples = int(s->integer("samples", o.samples));
  o.leak_tol = s->number("leak_tol", o.leak_tol);
  o.rel_tol = s->number("rel_tol", o.rel_tol);
  o.fock_rtol = s->number("fock_rtol", o.fock_rtol);
  o.fock_atol = s->number("fock_atol", o.fock_atol);
  o.moments_rtol = s->number("moments_rtol", o.moments_rtol);
  o.moments_atol = s->number("moments_atol", o.moments_atol);
  if (s->has("span")) {
    std::vector<double> w = s->numbers("span");
    if (w.size() != 2 || !(w[0] < w[1]))
      throw ConfigError(c.path() + ": [oracle] span needs 't0, t1' with t0 < t1");
    o.t_span = {w[0], w[1]};
  }
  return o;
}

SweepSettings sweep_from(const Config& c) {
  const ConfigSection& s = c.require("sweep");
  s.allow_only({"param"});
  static const std::vector<std::string> kNames = {
      "Omega0", "kappa_delta", "h_delta", "tau", "tau_ch",
      "t_c",    "T",           "t_start", "t_end"};
  SweepSettings out;
  for (const ConfigEntry* e : s.all("param")) {
    std::vector<std::string> f = split_fields(e->value);
    if (f.size() != 4)
      fail(s.origin, e->line, "param needs 'name, lo, hi, count'");
    SweepAxis ax;
    ax.name = unquote(f[0]);
    if (std::find(kNames.begin(), kNames.end(), ax.name) == kNames.end())
      fail(s.origin, e->line, "unknown sweep parameter '" + ax.name + "'");
    ax.lo = parse_number(f[1], s.origin, e->line, "param.lo");
    ax.hi = parse_number(f[2], s.origin, e->line, "param.hi");
    ax.count = int(parse_integer(f[3], s.origin, e->line, "param.count"));
    if (ax.count < 1) fail(s.origin, e->line, "param count must be >= 1");
    if (ax.count > 1 && !(ax.lo < ax.hi))
      fail(s.origin, e->line, "param needs lo < hi");
    out.axes.push_back(std::move(ax));
  }
  if (out.axes.empty() || out.axes.size() > 2)
    throw ConfigError(c.path() + ": [sweep] needs one or two 'param' entries");
  return out;
}

void apply_sweep_param(const std::string& name, double value, const Config& c,
                       PulseSchedule& s, TruncationWindow& w) {
  if (name == "Omega0") {
    PulseSchedule fresh = canonical_schedule(value);
    // Explicit [schedule] overrides stay pinned while the family rescales.
    if (const ConfigSection* sec = c.find("schedule")) {
      fresh.t_c = sec->number("t_c", fresh.t_c);
      fresh.T = sec->number("T", fresh.T);
      fresh.kappa_delta = sec->number("kappa_delta", fresh.kappa_delta);
      fresh.h_delta = sec->number("h_delta", fresh.h_delta);
      fresh.tau = sec->number("tau", fresh.tau);
      fresh.tau_ch = sec->number("tau_ch", fresh.tau_ch);
    }
    s = fresh;
  } else if (name == "kappa_delta") {
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
  } else {
    throw ConfigError("unknown sweep parameter '" + name + "'");
  }
}

}  // namespace stirap::cli
