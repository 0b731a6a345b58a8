#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace wftc {

enum ExitCode { kAllTrue = 0, kSomeFalse = 1, kUsageError = 2, kResourceError = 3 };

// argv-style entry point shared by the executable and the tests
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace wftc
