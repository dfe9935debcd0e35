#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace sdesplit {

// Exit codes: 0 ok, 2 input error, 3 undecided at the weight cap,
// 4 internal inconsistency.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sdesplit
