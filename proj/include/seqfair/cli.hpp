#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace seqfair::cli {

// Runs the `seqfair` command line. args[0] is the program name. Data goes to
// `out` (or to files), diagnostics to `err`. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace seqfair::cli
