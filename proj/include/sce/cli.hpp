#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sce {

/// Process exit codes of the `sce` tool.
enum ExitCode : int {
  exit_success = 0,
  exit_config_error = 2,
  exit_numerical_failure = 3,
  exit_unsupported_dimension = 4,
};

/// Runs the command line `args` (without the program name), writing normal
/// output to `out` and diagnostics to `err`. Returns the exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Expands `--config FILE` into the flags it lists. Each non-empty line of the
/// file is `key = value` (or just `key` for switches); `#` starts a comment.
/// Keys are flag names without the leading dashes; repeated keys repeat the flag.
std::vector<std::string> expand_config_files(const std::vector<std::string>& args);

}  // namespace sce
