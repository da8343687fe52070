#ifndef GWOFI_ERRORS_HPP
#define GWOFI_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace gwofi {

// Error buckets map to CLI exit codes: ConfigError -> 1, SchemaError and
// DataError -> 2, NumericError (and anything else) -> 3.

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct SchemaError : std::runtime_error {
    explicit SchemaError(const std::string& msg) : std::runtime_error(msg) {}
};

struct DataError : std::runtime_error {
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace gwofi

#endif
