#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace markhawkes::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitData = 3;

/// Runs one command. `args` excludes the program name; args[0] is the
/// subcommand (eda, fit, evaluate, simulate, smote). Returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace markhawkes::cli
