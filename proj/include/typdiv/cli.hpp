#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace typdiv {

// Runs one subcommand (matrix, sample, metrics, sweep, expand, audit).
// Returns the process exit status; diagnostics go to `err` prefixed with
// `typdiv: error[<kind>]:`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace typdiv
