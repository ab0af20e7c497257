#pragma once

#include <string>
#include <vector>

namespace qphase::cli {

/// Entry point shared by the binary and the tests.  Returns the process
/// exit code: 0 success, 2 configuration error, 3 numerical-check failure.
int run(const std::vector<std::string>& args);
int run(int argc, char** argv);

}  // namespace qphase::cli
