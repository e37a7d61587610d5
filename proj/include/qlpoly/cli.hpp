#pragma once

#include <iosfwd>

namespace qlpoly {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitInput = 3;

/// Entry point of the qlpoly command line tool. Normal output goes to `out`
/// (or the --output file), diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qlpoly
