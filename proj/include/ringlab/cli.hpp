#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ringlab::cli {

enum ExitCode : int { kOk = 0, kInputError = 2, kSolverError = 3, kToleranceFailure = 4 };

/// Entry point of the `ringlab` tool. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ringlab::cli
