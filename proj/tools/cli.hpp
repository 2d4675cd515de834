#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace en::cli {

enum ExitCode : int {
  kOk = 0,
  kSelftestFailed = 1,
  kValidation = 2,
  kConsistency = 3,
  kBudget = 4,
};

/// Runs the command line `args` (without the program name). Data goes to
/// `out` unless --out names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace en::cli
