#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "config.hpp"

namespace kppfront::cli {

struct Options {
  std::filesystem::path out = "out";
  int workers = 0;
  bool verbose = false;
};

/// Names accepted by run_command, in help order.
const std::vector<std::string>& command_names();

/// Runs one experiment and writes its artifacts. Returns 0, or 3 when the
/// dynamical outcome stayed Undecided. Errors propagate as exceptions.
int run_command(const std::string& name, Config& config, const Options& options);

/// Exit code for an exception escaping run_command.
int exit_code_for(const std::exception& e);

}  // namespace kppfront::cli
