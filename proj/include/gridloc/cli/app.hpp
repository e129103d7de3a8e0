#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace gridloc::cli {

/// Exit codes of the command-line front end.
enum ExitCode : int { kOk = 0, kUsage = 1, kDataError = 2, kInternal = 3 };

/// Runs the CLI with argv-style arguments (args[0] is the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gridloc::cli
