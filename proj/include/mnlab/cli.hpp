#pragma once

// Command-line front end. run_cli takes the arguments after the program name
// and returns the exit status:
//   0  admissible / consistent / success
//   1  inadmissible / inconsistent
//   2  usage or input error (message on `err`)

#include <iosfwd>
#include <string>
#include <vector>

namespace mnlab {

inline constexpr int kExitOk = 0;
inline constexpr int kExitNegative = 1;
inline constexpr int kExitUsage = 2;

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mnlab
