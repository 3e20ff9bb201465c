#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ridgepois::cli {

/// Exit codes: 0 success, 1 run finished but produced error rows,
/// 2 module error, 64 usage error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitErrorRows = 1;
inline constexpr int kExitModuleError = 2;
inline constexpr int kExitUsage = 64;

/// Runs one invocation; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ridgepois::cli
