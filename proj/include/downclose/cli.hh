#pragma once

// Command-line front end. Exit codes: 0 answered (yes), 1 answered no / not
// directed, 2 usage, parse or precondition error, 3 resource cap, 4 internal error.

#include <iosfwd>
#include <string>
#include <vector>

namespace downclose::cli {

inline constexpr int exit_yes = 0;
inline constexpr int exit_no = 1;
inline constexpr int exit_usage = 2;
inline constexpr int exit_cap = 3;
inline constexpr int exit_internal = 4;

/// Runs one invocation; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace downclose::cli
