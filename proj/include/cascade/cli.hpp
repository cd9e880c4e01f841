#pragma once

#include <iosfwd>

namespace cascade {

//! Exit statuses of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitValidation = 1, kExitInfeasible = 2, kExitStorage = 3 };

//! Runs one command-line invocation. Results go to `out`, diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cascade
