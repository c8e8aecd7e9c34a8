#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace qpcf::cli {

// Exit codes: 0 ok, 1 non-termination or internal failure, 2 bad input or precondition,
// 3 precision exhausted, 4 budget exceeded.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qpcf::cli
