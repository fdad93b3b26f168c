#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace wk {

/// Runs one command line (without the program name) against the two streams.
/// Returns the process exit code: 0 on success, 1 on a computation or cache
/// failure (machine-readable error JSON on err), 2 on a usage error.
int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace wk
