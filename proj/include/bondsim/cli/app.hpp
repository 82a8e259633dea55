#pragma once

#include <iosfwd>

namespace bondsim::cli {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

// Entry point of the bondsim executable, with injectable streams for tests.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace bondsim::cli
