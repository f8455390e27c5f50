#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ssfgm {

/// Exit statuses of the command-line front end.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitData = 2,
  kExitNumeric = 3,
};

/// Runs one subcommand (featurize, generate, train, predict, eval, bench).
/// `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ssfgm
