#pragma once

#include <iosfwd>

namespace rdl::cli {

enum ExitCode : int {
  kConsistent = 0,
  kInputError = 1,
  kNumericalFailure = 2,
  kInconsistent = 3,
};

/// Entry point for the `rdl` tool. The machine-readable report goes to
/// `out` (or --out FILE), the human-readable summary and diagnostics to
/// `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rdl::cli
