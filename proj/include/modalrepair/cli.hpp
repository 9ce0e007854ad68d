#pragma once

#include <iosfwd>

namespace modalrepair {

// Exit codes of the command-line front end.
inline constexpr int kExitOk = 0;
inline constexpr int kExitNumerical = 1;
inline constexpr int kExitUsage = 2;

/// Runs one `modalrepair <subcommand> ...` invocation. Diagnostics go to `err`,
/// short summaries to `out`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace modalrepair
