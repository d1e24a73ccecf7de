#pragma once

// Command-line front end: parses argv, dispatches to the library and writes
// one report to `out`. Exit codes: 0 success, 1 input error, 2 a
// verification check failed.

#include <ostream>
#include <string>
#include <vector>

namespace chs::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitVerifyFail = 2;

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Convenience overload; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace chs::cli
