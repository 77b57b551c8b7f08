#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace fracshadow::cli {

/// Runs one command. `args` excludes the program name. Returns the exit
/// status: 0 on success, 1 for usage or expression errors, 2 for numerical
/// or domain failures.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fracshadow::cli
