#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace phidiv::cli {

// Exit codes of the phidiv binary.
inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitUsage = 2;

// Runs one invocation (args excludes the program name) and returns its exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace phidiv::cli
