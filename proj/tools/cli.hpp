#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

namespace tju::cli {

enum ExitCode : int { Ok = 0, ConfigFailure = 2, NumericFailure = 3, IoFailure = 4 };

/// Bad command line or config file contents.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Unreadable config or unwritable output.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Entry point behind the tjusim executable. Results go to `out` unless
/// --out names a file; failures are reported on `err` as one JSON line.
int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

} // namespace tju::cli
