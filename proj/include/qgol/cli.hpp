#pragma once

#include <string>
#include <vector>

namespace qgol {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int {
    exit_ok = 0,
    exit_usage = 1,
    exit_numeric = 2,
    exit_check_failed = 3,
};

/// Entry point of the `qgol` command-line tool. args[0] is the program name.
int run_cli(const std::vector<std::string>& args);

} // namespace qgol
