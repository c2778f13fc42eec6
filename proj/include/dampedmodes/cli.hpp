#pragma once

#include <string>
#include <vector>

namespace dampedmodes {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitInput = 2;
inline constexpr int kSchemaVersion = 1;

/// Entry point of the `dampedmodes` tool. Returns the process exit code:
/// 0 on success, 1 on a domain failure (invalid cell, no root, ...), 2 on
/// unreadable input or bad arguments.
int run_cli(int argc, const char* const* argv);
int run_cli(const std::vector<std::string>& args);

}  // namespace dampedmodes
