#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace napmon::cli {

/// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kIoError = 1,        // unreadable/unwritable files, malformed file contents
  kUsageError = 2,     // bad flags or invalid configuration values
  kFingerprint = 3,    // monitor evaluated against a different network
};

/// Runs one invocation. args excludes the program name, e.g.
/// {"build", "--network", "net.json", ...}. Data goes to `out`, diagnostics
/// to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace napmon::cli
