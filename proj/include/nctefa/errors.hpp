#pragma once

#include <stdexcept>
#include <string>

namespace nctefa {

/// Bad or inconsistent input data (malformed files, failed joins, coverage gaps).
/// CLI maps this to exit code 2.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Numerical failure (non-convergence, residual out of tolerance, oracle mismatch).
/// CLI maps this to exit code 3.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace nctefa
