#ifndef OLGPP_CLI_HPP
#define OLGPP_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace olgpp::cli {

enum ExitCode : int { ok = 0, usage = 1, violations = 2, resolution = 3 };

/// Entry point behind the `olgpp` binary. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

} // namespace olgpp::cli

#endif
