#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace specreg::cli {

enum ExitCode : int { kOk = 0, kAssertionFailed = 1, kUsage = 2 };

/// Runs one command line. args excludes the program name. Returns the exit
/// status: 0 success, 1 when an experiment or certificate assertion failed,
/// 2 on usage, config or input errors.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace specreg::cli
