#pragma once

#include <iosfwd>

namespace vibronic::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitNumerical = 2;

/// Entry point of the `vibronic` tool. Subcommands: list-scenarios, run,
/// measure, verify, wigner. Returns the process exit code.
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace vibronic::cli
