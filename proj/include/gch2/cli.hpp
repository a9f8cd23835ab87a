#pragma once

/// @file cli.hpp
/// @brief Command-line front end shared by the `gch2` executable and its tests.

#include <iosfwd>

namespace gch2 {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerdictFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitBlowUp = 3;

/// Parses argv, runs the selected subcommand and returns the process exit code.
int parse_and_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gch2
