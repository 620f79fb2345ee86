#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace kpdrl::cli {

/// Exit codes of the command-line tool.
inline constexpr int kOk = 0;
inline constexpr int kRuntimeFailure = 1;
inline constexpr int kUsageError = 2;

/// Environment variable naming the directory relative output paths go to.
inline constexpr const char *kOutDirEnv = "KPDRL_OUT_DIR";

/// Runs the tool on `args` (without the program name), writing normal
/// output to `out` and diagnostics to `err`.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace kpdrl::cli
