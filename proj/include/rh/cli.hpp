#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rh::cli {

// Runs one command (arguments exclude the program name). Returns 0 iff the
// report contains no violation: pass, S3xS1, S3twistS1, or a plain query.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rh::cli
