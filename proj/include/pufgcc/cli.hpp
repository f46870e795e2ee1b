#pragma once

#include <string>
#include <vector>

namespace pufgcc::cli {

/// Process exit codes.
enum ExitCode : int {
  kSuccess = 0,
  kUsage = 2,
  kParseOrIo = 3,
  kDecodeFailure = 4,
};

/// Runs the command line `args` (args[0] is the program name) and returns the
/// exit code. Diagnostics go to stderr, reports without --out to stdout.
int run(const std::vector<std::string>& args);

}  // namespace pufgcc::cli
