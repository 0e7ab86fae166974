#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ncavg/errors.hpp"

namespace ncavg {

enum ExitCode : int {
  kExitPass = 0,
  kExitVerificationFailure = 1,
  kExitInvalidInput = 2,
  kExitInfeasible = 3,
  kExitConvergence = 4,
};

int exit_code_for(ErrorCode code) noexcept;

/// Runs the ncavg command line. `args` excludes the program name. JSON and
/// CSV go to `out` unless --output names a file; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ncavg
