#ifndef PATER_CLI_HPP
#define PATER_CLI_HPP

#include <string>
#include <vector>

namespace pater {

/// Entry point behind the `pater` binary. Returns the process exit status:
/// 0 on success, 2 for usage errors, 1 for any other diagnostic.
int run_cli(int argc, const char* const* argv);

/// Convenience overload for in-process invocation (args exclude argv[0]).
int run_cli(const std::vector<std::string>& args);

}  // namespace pater

#endif  // PATER_CLI_HPP
