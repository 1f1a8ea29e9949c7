#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace dephasim::cli {

// Exit codes: 0 ok, 2 usage/parse error, 3 resource cap exceeded,
// 4 numerical failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dephasim::cli
