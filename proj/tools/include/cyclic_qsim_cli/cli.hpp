#pragma once

#include <iosfwd>

namespace cqsim::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitParameter = 2,
  kExitCapability = 3,
  kExitValidation = 4,
};

/// Entry point shared by the executable and the tests. Never calls std::exit.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cqsim::cli
