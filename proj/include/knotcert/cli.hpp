#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace knotcert::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitPrecondition = 1;
inline constexpr int kExitBudget = 2;

/// Runs one invocation; args excludes the program name. Results go to `out`
/// (or the --out file), diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace knotcert::cli
