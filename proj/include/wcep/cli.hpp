#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace wcep::cli {

/// Exit statuses of the command-line tool.
enum ExitCode : int {
  ok = 0,
  /// I/O, parse, or validation error.
  error = 1,
  /// compute: the requested inverse does not exist.
  /// verify/report: at least one suite has failures.
  negative = 2,
};

/// Runs one invocation. `args` excludes the program name. JSON payloads go
/// to `out`, diagnostics and help to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace wcep::cli
