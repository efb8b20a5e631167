#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace remedy::cli {

// Runs one command line (without the program name). Exit codes: 0 success,
// 1 usage, I/O or validation error, 2 localization or remediation failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace remedy::cli
