#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace chronosite::project {

enum ExitCode : int { kExitOk = 0, kExitError = 1, kExitWarnings = 2 };

// Runs one CLI invocation. `args` excludes the program name. Structured
// results go to `out` (one JSON object per line unless stated otherwise),
// diagnostics and warnings to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace chronosite::project
