#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qfilter::cli {

// Exit statuses.
inline constexpr int kOk = 0;
inline constexpr int kFailure = 1;
inline constexpr int kUsage = 2;

/// Runs the command line `args` (without the program name). Results go to
/// `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qfilter::cli
