#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace amlas::cli {

inline constexpr int kExitClean = 0;
inline constexpr int kExitFindings = 1;
inline constexpr int kExitEnvironment = 2;

/// Runs one command. `args` excludes the program name. Human diagnostics go to `err`,
/// machine output (--json) and listings to `out`.
[[nodiscard]] int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace amlas::cli
