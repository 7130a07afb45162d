#pragma once

#include <string>
#include <vector>

namespace rlab::cli {

enum ExitCode : int { kOk = 0, kRefusal = 1, kConfigError = 2 };

// Entry point of the rlab tool; args exclude the program name.
int run(const std::vector<std::string>& args);

}  // namespace rlab::cli
