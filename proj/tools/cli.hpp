#pragma once

#include <string>
#include <vector>

namespace fparadox_cli {

/// Runs one subcommand; `args` excludes the program name. Returns the
/// process exit code: 0 success, 1 domain error, 2 usage error.
int execute(const std::vector<std::string>& args);

}  // namespace fparadox_cli
