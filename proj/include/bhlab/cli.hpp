#pragma once

#include <ostream>

namespace bhlab {

// Exit codes of the bhlab command line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 2,            // bad flags, spec, input or table
  kExitPromise = 3,          // promise violation
  kExitBranchLimit = 4,      // exact enumeration too large
  kExitSearchSpace = 5,      // brute-force space too large
};

// bhlab run | expect | sweep | brute | gen-input. `out` receives the
// command's product (JSON or CSV); diagnostics go to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace bhlab
