#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace gqlimit {

enum ExitCode : int { kExitOk = 0, kExitInput = 2, kExitNumerical = 3 };

/// Entry point of the `gqlimit` tool. Reports go to `out`, diagnostics to `err`.
/// Returns 0 on success, 2 for invalid input or configuration and 3 for
/// numerical failures.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gqlimit
