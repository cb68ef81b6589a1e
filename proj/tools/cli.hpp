#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mlsat::cli {

// Exit codes.
inline constexpr int kExitSat = 10;
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitViolated = 2;  // check: some clause unsatisfied

/// Runs one invocation; args excludes the program name. `in` backs the "-"
/// path.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err);

}  // namespace mlsat::cli
