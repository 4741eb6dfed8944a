#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace c3bf::cli {

/// Exit codes: 0 success (for `run`: collision-free), 2 collision in `run`,
/// 1 configuration or runtime error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitCollision = 2;

/// `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace c3bf::cli
