#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace argus::tools {

// Exit codes: 0 success, 2 validation error, 3 infeasible, 4 timeout.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, char** argv);

}  // namespace argus::tools
