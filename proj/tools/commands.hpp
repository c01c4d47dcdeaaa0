#pragma once

#include <string>

#include "config.hpp"

namespace stirap::cli {

// Parsed command line: one subcommand, a config, an output directory, and
// whichever override flags were supplied.
struct GlobalArgs {
  std::string command;
  std::string config_path;
  std::string out_dir = ".";
  Overrides ov;
};

int cmd_transfer(const GlobalArgs& args);
int cmd_cool(const GlobalArgs& args);
int cmd_spectrum(const GlobalArgs& args);
int cmd_compare(const GlobalArgs& args);
int cmd_oracle_check(const GlobalArgs& args);
int cmd_tune(const GlobalArgs& args);
int cmd_sweep(const GlobalArgs& args);

// Dispatches on args.command; throws ConfigError for unknown commands.
int run_command(const GlobalArgs& args);

}  // namespace stirap::cli
