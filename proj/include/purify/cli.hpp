#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace purify::cli {

enum ExitCode : int {
    kSuccess = 0,
    kConfigError = 2,
    kNumericDegeneracy = 3,
};

/// Runs the command line with `args` excluding the program name. CSV goes to
/// `out` unless --out names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace purify::cli
