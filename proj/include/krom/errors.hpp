#pragma once

#include <stdexcept>
#include <string>

namespace krom {

// Bad user input: malformed files, out-of-range parameters, config mistakes.
// The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failure: rank deficiencies, non-finite data, degenerate inputs.
// The CLI maps this to exit code 3.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace krom
