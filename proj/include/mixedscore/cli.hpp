#ifndef MIXEDSCORE_CLI_HPP
#define MIXEDSCORE_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace mixedscore {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

/// Entry point of the `mixedscore` tool: subcommands detect, simulate and
/// eval. `args` excludes the program name. Returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mixedscore

#endif  // MIXEDSCORE_CLI_HPP
