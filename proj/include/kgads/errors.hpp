#pragma once

#include <stdexcept>
#include <string>

namespace kgads {

struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

struct ShapeError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raised when a truncation budget (spectral or spatial tail) is exceeded.
struct TailError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PreconditionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct AdmissibilityError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Raised when a least-squares fit has too few points to be meaningful.
struct FitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TrackingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace kgads
