#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace locinv::cli {

/// Exit codes.
inline constexpr int kOk = 0;
/// No solution, inconclusive search or a failed self-test check.
inline constexpr int kNoResult = 1;
inline constexpr int kUsage = 2;

/// Runs one command line (args excludes the program name). Reports go to `out`,
/// usage and input errors to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace locinv::cli
