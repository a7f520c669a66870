#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace martlab {

// Exit codes: 0 ok, 1 property violation found (a result for the
// check-style commands), 2 parse or precondition error, 3 budget
// exhausted.
inline constexpr int kExitOk = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitBadInput = 2;
inline constexpr int kExitBudget = 3;

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace martlab
