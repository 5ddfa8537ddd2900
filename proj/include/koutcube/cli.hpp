#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace koutcube::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRefused = 1;  // runtime refusal: size caps, unreadable files
inline constexpr int kExitUsage = 2;    // bad flags or values; one-line reason on `err`

// Runs one subcommand. `args` excludes the program name.
int dispatch(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace koutcube::cli
