#pragma once

// Command-line front end: `netcca fit|cv|simulate`. Kept in a library so
// tests can drive it in-process.

#include <ostream>

namespace netcca {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;       // bad flags, unreadable input, validation failure
inline constexpr int kExitDegenerate = 2;  // trivial fit, all-degenerate CV, degenerate grid
inline constexpr int kExitPartial = 3;     // fewer than 80% of study replicates completed

// Parses argv and runs the command. Diagnostics go to `err` as single lines;
// progress and the paths written go to `out`.
int runCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace netcca
