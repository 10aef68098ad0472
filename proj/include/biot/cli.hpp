#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace biot {

/// Exit codes of the command-line front end.
enum ExitCode : int {
  exit_ok = 0,
  exit_assertion = 1,
  exit_solver = 2,
  exit_usage = 64,
};

/// Runs the CLI on `args` (args[0] is the program name).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace biot
