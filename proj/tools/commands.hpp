#pragma once

#include <iosfwd>

namespace primhom::cli {

/// Exit statuses of the command-line tool.
enum ExitCode : int {
  kExitPass = 0,
  kExitViolation = 1,  ///< a check failed or a property was violated
  kExitConfig = 2,     ///< invalid configuration or a size guard was hit
};

/// Parses the arguments, runs one subcommand and writes its JSON report to
/// `--out` or to `out`.  Diagnostics go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace primhom::cli
