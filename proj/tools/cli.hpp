#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ddestab::cli {

// Exit codes: 0 success or satisfied, 2 well-formed but negative verdict, 1 error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitNegative = 2;

/// Runs the tool on argv[1..] and returns the exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ddestab::cli
