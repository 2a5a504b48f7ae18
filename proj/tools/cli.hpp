#pragma once

#include <iosfwd>

namespace entrywise::cli {

// Parses argv and runs the chosen subcommand, writing results to `out` and
// diagnostics to `err`. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace entrywise::cli
