#pragma once

#include <string>
#include <vector>

namespace obench {

/// Runs the `obench` command line. Returns 0 on success, 1 on a domain, parse
/// or I/O error and 2 on a usage error. Logs go to stderr.
int cli_dispatch(int argc, const char* const* argv);
/// Same, with the arguments after the program name.
int cli_dispatch(const std::vector<std::string>& args);

}  // namespace obench
