#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace fitch {

/// Runs `fitchcalc` with `args` (program name excluded). Returns 0 on
/// success, 1 when a check, goal or suite fails, 2 on usage or parse errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Goal name made lexable as a `.fmlc` identifier.
std::string goal_ident(const std::string& name);

}  // namespace fitch
