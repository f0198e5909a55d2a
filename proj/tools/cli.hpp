#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace currsim::cli {

/// Exit codes of the command-line tool.
enum ExitCode : int { kOk = 0, kRuntimeError = 1, kUsageError = 2 };

/// Runs the tool with `args` (args[0] is the program name). Output that is
/// not redirected with --out goes to `out`; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Parses `lo:hi:step` or a comma-separated list. Throws
/// std::invalid_argument on malformed input.
std::vector<double> parse_real_grid(const std::string& spec);
std::vector<unsigned long long> parse_count_grid(const std::string& spec);

}  // namespace currsim::cli
