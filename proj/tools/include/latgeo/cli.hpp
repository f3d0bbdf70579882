#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace latgeo::cli {

/// Exit codes of the command-line interface.
enum Exit : int { Ok = 0, Disagreement = 1, BadInput = 2, Capacity = 3 };

/// Runs one invocation.  `args` excludes the program name.  Data goes to
/// `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace latgeo::cli
