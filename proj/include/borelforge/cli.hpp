#pragma once
#include <iosfwd>
#include <string>
#include <vector>

namespace borelforge {

// Command-line front door. `args` excludes the program name. Writes artifacts
// to `out` (or the configured file) and error JSON to `err`. Returns the
// process exit status: 0 all checks passed, 1 a check failed, 2 usage or
// instance error, 3 I/O error.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace borelforge
