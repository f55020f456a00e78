#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace vampcf::cli {

enum ExitCode : int { kOk = 0, kUsageError = 1, kDataError = 2, kNumericalFailure = 3 };

/// Full command-line entry point: prepare, train, eval, recommend,
/// gradcheck. `args` excludes the program name. Library errors are mapped
/// to exit codes and reported on `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace vampcf::cli
