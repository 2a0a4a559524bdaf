#pragma once

#include <ostream>

#include "cavgeo_cli/config.hpp"

namespace cavgeo::cli {

enum ExitCode : int { kOk = 0, kConfigError = 2, kPhysicsGuard = 3, kConvergence = 4 };

/// Parses arguments, runs the subcommand and writes the result to --out (or
/// `out`). Errors are reported on `err` as one line:
///   error code=<code> exit=<n> message="<text>"
int run_app(int argc, const char* const* argv, std::ostream& out, std::ostream& err, const EnvList& env);

}  // namespace cavgeo::cli
