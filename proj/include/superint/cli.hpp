#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace superint {

// Exit statuses of the command-line front end.
enum ExitCode { kExitOk = 0, kExitValidation = 2, kExitNumerical = 3, kExitIo = 4 };

// Runs one command; args excludes the program name. Data goes to `out` unless
// --out is given, in which case `out` receives a one-line summary.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace superint
