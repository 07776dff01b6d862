#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace minctrl {

/// Process exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitNegative = 1,
  kExitInput = 2,
  kExitAmbiguity = 3,
  kExitInternal = 4,
};

/// Runs `minctrl <args...>` (args exclude the program name). Reports go to
/// `out`, diagnostics to `err`; returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace minctrl
