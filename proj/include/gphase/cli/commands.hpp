#ifndef GPHASE_CLI_COMMANDS_HPP
#define GPHASE_CLI_COMMANDS_HPP

#include <ostream>
#include <string>
#include <vector>

namespace gphase::cli {

/// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitNotLiftable = 3;

/// Runs one command line (without the program name). Data goes to `out` (or
/// to --out PATH); diagnostics only ever go to `err`.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gphase::cli

#endif  // GPHASE_CLI_COMMANDS_HPP
