#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace genomotif::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

// Parses and runs one subcommand. Results go to `out` unless a subcommand
// writes files; diagnostics go to `err`.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace genomotif::cli
