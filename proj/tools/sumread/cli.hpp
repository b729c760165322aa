#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sumread::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitRecordErrors = 2;
inline constexpr int kExitUsage = 64;
inline constexpr int kExitData = 65;

/// Runs `sumread <subcommand> [flags]`. args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sumread::cli
