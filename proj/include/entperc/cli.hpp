#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace entperc {

/// Exit codes of the command-line front end.
enum ExitCode : int { kExitOk = 0, kExitError = 1, kExitUsage = 2, kExitNumerical = 3 };

/// Runs the `entperc` command line. `args` excludes the program name.
/// Results go to `out` unless --out names a file; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace entperc
