#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace symcat::cli {

/// Runs one invocation (args exclude the program name) and returns the exit
/// code: 0 all checks pass, 1 some check failed, 2 usage or input error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace symcat::cli
