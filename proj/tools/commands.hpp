#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace specoarse::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
/// No refinement converged, or a verification found a violation.
inline constexpr int kExitFailed = 2;

/// Runs one command line given without the program name, e.g.
/// {"estimate-eig", "--gen", "lap1d:4", "--out", "run"}.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace specoarse::cli
