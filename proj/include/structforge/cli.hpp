#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace structforge::cli {

// Exit codes shared by every subcommand.
inline constexpr int kOk = 0;
inline constexpr int kUnstable = 1;  // also "invalid" for validate
inline constexpr int kError = 2;

// args excludes the program name. Errors are written to err as one line
// starting with "error[<kind>]: ".
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace structforge::cli
