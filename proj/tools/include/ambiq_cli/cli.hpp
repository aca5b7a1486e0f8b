#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ambiq::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitInternal = 1,
  kExitValidation = 2,
  kExitIo = 3,
};

/// Runs one invocation. args[0] is the program name. Normal output goes to
/// `out` (unless --output redirects it), diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ambiq::cli
