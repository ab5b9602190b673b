#ifndef PSSA_CLI_HPP
#define PSSA_CLI_HPP

#include <string>
#include <vector>

namespace pssa::cli {

/// Runs a CLI invocation (without the program name). Exit codes:
/// 0 success, 2 validation error (bad flags, malformed or invalid data),
/// 3 numerical failure.
int run(const std::vector<std::string>& args);

}  // namespace pssa::cli

#endif  // PSSA_CLI_HPP
