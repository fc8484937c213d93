#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace pttunnel::cli {

enum ExitCode : int {
  kSuccess = 0,
  kInvalidInput = 2,
  kLimitCheckFailed = 3,
  kNumericFailure = 4,
};

/// Runs the command line `pttunnel <args...>` (program name excluded).
int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace pttunnel::cli
