#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace diagcalc {

// Exit codes: 0 ok, 1 usage or input error, 2 underdetermined, 3 infeasible or failed check.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace diagcalc
