#pragma once

namespace safeplan::cli {

// Exit codes shared by every subcommand.
inline constexpr int exit_ok = 0;
inline constexpr int exit_no_plan = 1;
inline constexpr int exit_error = 2;
inline constexpr int exit_limit = 3;

int run(int argc, char **argv);

} // namespace safeplan::cli
