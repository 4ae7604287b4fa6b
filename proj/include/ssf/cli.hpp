#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ssf {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitIntrusion = 2;
inline constexpr int kExitUsage = 64;

/// Entry point of the `ssf` tool. `args` excludes the program name.
/// Subcommands: train, detect, scan, evaluate.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

} // namespace ssf
