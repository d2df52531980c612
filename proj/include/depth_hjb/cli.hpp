#pragma once

#include <string>
#include <vector>

namespace depth_hjb {

/// Command-line entry point. `args` excludes the program name.
/// Exit codes: 0 success, 1 usage or runtime error, 2 solver non-convergence.
int run(const std::vector<std::string>& args);

}  // namespace depth_hjb
