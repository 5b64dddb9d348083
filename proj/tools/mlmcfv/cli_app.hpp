#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mlmcfv::cli {

enum ExitCode : int {
  kSuccess = 0,
  kConfigError = 1,
  kNumericalFailure = 2,
};

/// Parses the command line (including an optional --config file, whose
/// [run] section keys mirror the long flag names), runs, and maps failures
/// to exit codes.
int main_entry(const std::vector<std::string>& args, std::ostream& out,
               std::ostream& err);

}  // namespace mlmcfv::cli
