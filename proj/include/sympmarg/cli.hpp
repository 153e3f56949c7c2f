#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "sympmarg/error.hpp"

namespace sympmarg::cli {

enum ExitCode : int {
  kOk = 0,
  kInfeasible = 1,
  kInputError = 2,
  kVerificationFailure = 3,
};

/// Environment variable overriding the default inequality tolerance.
inline constexpr const char* kTolEnv = "SYMPMARG_TOL_INEQ";

ExitCode exit_code_for(ErrorCode code);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view data, std::uint64_t h = 0xcbf29ce484222325ULL);

/// Runs one command line (without the program name). Machine-readable JSON
/// lines go to `out`, human-readable tables and diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sympmarg::cli
