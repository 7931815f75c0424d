#pragma once

#include <iosfwd>

namespace tinylca {

/// Exit codes: 0 success, 1 computation error, 2 usage or data error.
enum ExitCode : int { kExitOk = 0, kExitComputation = 1, kExitUsage = 2 };

/// Runs the `tinylca` command line. Results go to `out`, diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tinylca
