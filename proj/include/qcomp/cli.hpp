#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace qcomp {

enum ExitCode { kExitHolds = 0, kExitFails = 1, kExitInconclusive = 2, kExitUsage = 64, kExitInvalid = 65 };

// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qcomp
