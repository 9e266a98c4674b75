#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace hgcs::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
  kOk = 0,
  kCheckFailed = 1,  // a verification threshold was missed, or an internal error
  kConfigError = 2,
  kDomainError = 3,
  kConvergenceError = 4,
};

/// Runs one invocation. `args` excludes the program name. Reports go to the
/// --out file when given, otherwise to `out`; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hgcs::cli
