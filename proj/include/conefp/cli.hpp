#ifndef CONEFP_CLI_HPP
#define CONEFP_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace conefp {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
  kExitOk = 0,
  kExitInputError = 1,
  kExitMaxIterations = 2,
  kExitBoundaryEscape = 3,
  kExitIndeterminate = 4,
};

/// Entry point of the command-line tool. Reports go to `out`, diagnostics to
/// `err`; the return value is the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace conefp

#endif  // CONEFP_CLI_HPP
