#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pivotheso {

// Runs one command line (without the program name). Returns the process exit
// code: 0 success, 1 domain error (or validation errors), 2 usage error.
int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pivotheso
