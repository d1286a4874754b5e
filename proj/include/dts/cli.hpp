#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dts::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDataError = 1;  // validation / data problems
inline constexpr int kExitUsageError = 2; // I/O or argument problems

// Entry point of the `dts` tool. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dts::cli
