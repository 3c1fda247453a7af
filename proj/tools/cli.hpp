#pragma once

#include <iosfwd>

namespace acid {

/// Exit codes: 0 solved / ok, 1 input or validation error, 2 timeout,
/// 3 infeasible, 4 the validated plan has conflicts.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace acid
