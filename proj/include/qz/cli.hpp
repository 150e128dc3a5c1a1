#pragma once

namespace qz::cli {

enum ExitCode { kSuccess = 0, kUsage = 1, kValidationFailure = 2, kSolverFailure = 3 };

// Entry point of the qzlab tool; returns the process exit code.
int run_cli(int argc, char** argv);

}  // namespace qz::cli
