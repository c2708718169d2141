#pragma once

#include <iosfwd>

namespace conecalc::cli {

// Exit codes: Member / pass, NotMember / fail, Inconclusive, library error,
// usage error.
inline constexpr int kExitMember = 0;
inline constexpr int kExitNotMember = 1;
inline constexpr int kExitInconclusive = 2;
inline constexpr int kExitError = 3;
inline constexpr int kExitUsage = 4;

/// Runs the command line in-process. Never throws; every path maps to an
/// exit code above.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace conecalc::cli
