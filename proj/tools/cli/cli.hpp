#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qdl::cli {

enum ExitCode : int {
    kOk = 0,
    kFailure = 1,
    kUsage = 2,
    kDomain = 3,
    kResourceLimit = 4,
};

// Runs one command line (args excludes the program name). Data goes to `out`,
// diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace qdl::cli
