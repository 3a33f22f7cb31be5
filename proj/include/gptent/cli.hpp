#ifndef GPTENT_CLI_HPP
#define GPTENT_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace gptent::cli {

/// Exit codes: 0 success, 1 a check failed (see --expect), 2 input or usage error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitInputError = 2;

/// Runs one command; `args` excludes the program name.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gptent::cli

#endif  // GPTENT_CLI_HPP
