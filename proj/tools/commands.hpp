#pragma once

#include <string>
#include <vector>

namespace foldframe::cli {

// Executes one CLI invocation (arguments excluding the program name).
// Returns 0 on success, 1 on user error, 2 on internal error.
int run(const std::vector<std::string>& args);

}  // namespace foldframe::cli
