#include <clocale>
#include <cstdio>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "commands.hpp"
#include "config.hpp"

namespace {

using nlohmann::ordered_json;

void error_record(const std::string& code, const std::string& message) {
  ordered_json rec{{"error", {{"code", code}, {"message", message}}}};
  std::fprintf(stderr, "%s\n", rec.dump().c_str());
}

std::pair<double, double> parse_pair(const std::string& s, const char* flag) {
  size_t comma = s.find(',');
  if (comma == std::string::npos)
    throw stirap::ConfigError(std::string(flag) + " expects 'x,y', got '" + s + "'");
  try {
    size_t used1 = 0, used2 = 0;
    std::string a = s.substr(0, comma), b = s.substr(comma + 1);
    double x = std::stod(a, &used1);
    double y = std::stod(b, &used2);
    if (used1 != a.size() || used2 != b.size())
      throw std::invalid_argument(s);
    return {x, y};
  } catch (const std::exception&) {
    throw stirap::ConfigError(std::string(flag) + " expects 'x,y', got '" + s + "'");
  }
}

}  // namespace

int main(int argc, char** argv) {
  std::setlocale(LC_ALL, "C");

  CLI::App app{"STIRAP-assisted optomechanical cooling: scenario runner"};
  app.require_subcommand(1);

  stirap::cli::GlobalArgs args;
  bool rwa = false, full_moments = false;
  int cycles = 0, jobs = 0;
  std::string window_s, tol_s;

  const struct {
    const char* name;
    const char* desc;
  } kCommands[] = {
      {"transfer", "Single-excitation transfer through the full schedule"},
      {"cool", "Moment evolution: full schedule or iterated sub-pulse cooling"},
      {"spectrum", "Adiabatic eigenvalue branches, crossings, and gap report"},
      {"compare", "Analytic sideband limit vs iterated cooling, per scenario row"},
      {"oracle-check", "Covariance engine vs truncated-Fock master equation"},
      {"tune", "Nelder-Mead search over schedule/window parameters"},
      {"sweep", "Grid sweep over one or two parameters"},
  };
  for (const auto& c : kCommands) {
    CLI::App* sub = app.add_subcommand(c.name, c.desc);
    sub->add_option("--config", args.config_path, "Scenario config file")
        ->required();
    sub->add_option("--out", args.out_dir, "Output directory (created if missing)");
    sub->add_flag("--rwa,--no-counter-rotating", rwa,
                  "Drop the counter-rotating pair terms");
    sub->add_option("--cycles", cycles, "Iterated sub-pulse cycle count");
    sub->add_option("--window", window_s, "Truncation window 't_start,t_end'");
    sub->add_flag("--full-moments", full_moments,
                  "Append all twelve moments to trajectory CSVs");
    sub->add_option("--tol", tol_s, "Integrator tolerances 'rel,abs'");
    sub->add_option("--jobs", jobs, "Worker threads for compare/sweep");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    error_record("CliUsage", e.what());
    return 2;
  }

  CLI::App* sub = app.get_subcommands().front();
  args.command = sub->get_name();
  try {
    if (sub->count("--rwa") > 0 || sub->count("--no-counter-rotating") > 0)
      args.ov.rwa = true;
    if (sub->count("--cycles") > 0) args.ov.cycles = cycles;
    if (sub->count("--window") > 0)
      args.ov.window = parse_pair(window_s, "--window");
    if (sub->count("--tol") > 0) args.ov.tol = parse_pair(tol_s, "--tol");
    if (sub->count("--jobs") > 0) args.ov.jobs = jobs;
    args.ov.full_moments = full_moments;

    return stirap::cli::run_command(args);
  } catch (const stirap::ConfigError& e) {
    error_record(e.code(), e.what());
    return 2;
  } catch (const stirap::Error& e) {
    error_record(e.code(), e.what());
    return 1;
  } catch (const std::exception& e) {
    error_record("InternalError", e.what());
    return 1;
  }
}
