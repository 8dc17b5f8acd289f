#pragma once

#include <iosfwd>

namespace erosion::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Parses and runs one subcommand (synth, encrypt, atlas, model, calibrate,
/// scan, encode). Returns the process exit status.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace erosion::cli
