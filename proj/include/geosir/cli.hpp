#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace geosir {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;  // unreadable or malformed input, bad usage
inline constexpr int kExitQuery = 3;  // query or routing error

// Command-line entry point. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace geosir
