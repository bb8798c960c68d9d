// errors.hpp — exception types shared by all modules

#pragma once

#include <stdexcept>
#include <string>

namespace twomode {

// Input outside the mathematical domain of an operation (negative frequency, pole outside band, ...).
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// Rejected configuration or malformed input; the CLI maps this to exit code 1.
struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A numerical routine failed to meet its own consistency check; CLI exit code 2.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace twomode
