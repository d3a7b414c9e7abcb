// errors.hpp — exception types shared by the library and the CLI

#pragma once

#include <stdexcept>
#include <string>

namespace qbm {

// Invalid or inconsistent user input (config files, CLI overrides, parameter ranges).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// The numerics cannot produce a meaningful answer: unstable normal-mode spectrum,
// a covariance that is not a valid quantum state, a non-finite intermediate.
class StabilityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Relative entropy against a (near-)pure reference state diverges.
class DivergenceError : public StabilityError {
public:
    using StabilityError::StabilityError;
};

}  // namespace qbm
