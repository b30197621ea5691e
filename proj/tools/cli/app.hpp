#pragma once

// Command-line front end. Subcommands turn their flags into an
// ExperimentSpec, execute it and write the artifacts.

#include <iosfwd>

namespace carleson::cli {

enum ExitCode : int { kPass = 0, kFail = 1, kInconclusive = 2, kUsage = 3 };

/// Parses argv, runs the selected subcommand and returns the exit code.
/// Never throws.
int run_app(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace carleson::cli
