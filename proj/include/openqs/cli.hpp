#pragma once

#include <string>
#include <vector>

namespace openqs {

/// Runs one CLI invocation (argv without the program name). Exit codes:
/// 0 success, 2 input error, 3 numerical/validation failure,
/// 4 unreachable target or threshold.
int cli_run(const std::vector<std::string>& args);

}  // namespace openqs
