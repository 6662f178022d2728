#pragma once

#include <stdexcept>
#include <string>

namespace dwell {

/// Invalid user-supplied configuration (bad grid size, malformed config file,
/// out-of-range parameter). Maps to CLI exit code 1.
struct ConfigError : std::invalid_argument {
    explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

/// Operation applied outside its mathematical domain (zero-norm field,
/// packet support leaving the grid).
struct DomainError : std::domain_error {
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// Numerical breakdown during propagation (non-finite amplitudes, singular
/// tridiagonal pivot). Maps to CLI exit code 2.
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// Filesystem failure while emitting results.
struct IoError : std::runtime_error {
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace dwell
