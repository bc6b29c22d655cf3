#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace mtforge::cli {

// Exit statuses besides 0 (success).
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfigInvalid = 2;
inline constexpr int kExitEndpointUnavailable = 3;
inline constexpr int kExitDataError = 4;
inline constexpr int kExitUsage = 64;

// Entry point behind the mtforge binary. `args` excludes the program name.
// JSONL written to stdout goes to `out`; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mtforge::cli
