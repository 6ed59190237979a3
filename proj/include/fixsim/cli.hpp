#pragma once

#include <string>
#include <vector>

namespace fixsim {

inline constexpr const char* kVersion = "0.1.0";

// Entry point of the fixsim tool. Subcommands: exact, bounds, figure1,
// table1, logplot, fixtime, couple, certify, fit. Returns the process exit
// code: 0 success, 2 argument/config error, 3 domain error, 4 numerical
// failure.
int run_cli(int argc, char** argv);

// Same, for tests: arguments in natural order, without the program name.
int run_cli(const std::vector<std::string>& args);

}  // namespace fixsim
