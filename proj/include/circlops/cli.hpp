#pragma once

#include <iosfwd>

namespace circlops {

/// Exit codes of the command-line front end.
enum ExitCode : int { kExitPass = 0, kExitFailure = 1, kExitConfig = 2, kExitIo = 3 };

/// Parses argv, runs one subcommand and writes its JSON document to --out or
/// to `out`. Diagnostics go to `err`; a config error writes no report.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace circlops
