#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dmleaf::cli {

enum ExitCode : int { ok = 0, usage = 1, input = 2, invariant = 3 };

/// Runs one invocation. `args` excludes the program name. Relative paths are
/// opened as given; "-" or no path means `in`.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace dmleaf::cli
