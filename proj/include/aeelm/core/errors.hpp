#pragma once

#include <stdexcept>
#include <string>

namespace aeelm {

// Exit-code mapping for the CLI: ConfigError/DataError -> 1, NumericError -> 2.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad configuration: unknown keys, out-of-range values, unusable flags.
struct ConfigError : Error {
    using Error::Error;
};

// Malformed or inconsistent input data (CSV parse failures, shape mismatches).
struct DataError : Error {
    using Error::Error;
};

// Numerical failure: divergence, metric domain violations, singular systems.
struct NumericError : Error {
    using Error::Error;
};

} // namespace aeelm
