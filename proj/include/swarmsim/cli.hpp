#pragma once

#include <iosfwd>

namespace swarmsim {

enum ExitCode : int { kExitOk = 0, kExitConfigError = 1, kExitInternalError = 2 };

/// Entry point behind the swarmsim binary. Subcommands: run, bench,
/// scatter, pathology, replay. Returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace swarmsim
