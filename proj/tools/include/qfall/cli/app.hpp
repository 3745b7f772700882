#pragma once

#include <iosfwd>

namespace qfall::cli {

/// Exit codes of the qfall executable.
inline constexpr int kExitPass = 0;
inline constexpr int kExitChecksFailed = 1;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitGuardTripped = 3;

/// Environment variable holding the default worker count for sweeps.
inline constexpr const char* kThreadsEnv = "QFALL_THREADS";

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qfall::cli
