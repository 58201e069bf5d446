#pragma once

#include <string>
#include <vector>

namespace randbeta {

/// Parses and runs one CLI invocation (args exclude the program name).
/// Exit codes: 0 success, 1 contract error, 2 resource error, 64 usage error.
int run_cli(const std::vector<std::string>& args);

}  // namespace randbeta
