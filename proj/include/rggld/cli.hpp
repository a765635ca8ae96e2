#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace rggld::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitUsage = 2;

/// Environment variable consulted for the default --seed.
inline constexpr const char* kSeedEnv = "RGGLD_SEED";

/// Runs one command line (without the program name). Output files are written
/// where --out points; everything else goes to `out` / `err`.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rggld::cli
