#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace galpha::cli {

/// Runs one command; args exclude the program name. Returns the process exit
/// code: 0 success, 2 invalid configuration, 3 numerical failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace galpha::cli
