#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace iotk {

inline constexpr const char* kVersion = "0.1.0";

enum class ExitStatus : int { success = 0, failure = 1, usage = 2, io = 3 };

/// Runs the command-line tool. `args` excludes the program name. Reports go
/// to `out`, diagnostics to `err`.
ExitStatus run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace iotk
