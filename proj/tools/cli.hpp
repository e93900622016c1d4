#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace typematch::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

/// Runs the `typematch` command line. `args` excludes the program name.
/// Results that are not written to a file go to `out`; diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace typematch::cli
