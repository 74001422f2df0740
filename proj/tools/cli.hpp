#ifndef ALCS_TOOLS_CLI_HPP
#define ALCS_TOOLS_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace alcs::cli {

enum ExitCode : int {
  kOk = 0,
  kValidationError = 1,
  kIoError = 2,
  kCheckFailed = 3,
};

/// Entry point shared by the `alcs` binary and the tests. `args` excludes the
/// program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace alcs::cli

#endif // ALCS_TOOLS_CLI_HPP
