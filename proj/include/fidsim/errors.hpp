#pragma once

#include <stdexcept>
#include <string>

namespace fidsim {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Bad user-facing configuration (unknown model family, malformed config file, ...).
struct ConfigError : Error {
    using Error::Error;
};

/// Operand shapes or dimensions do not match.
struct ShapeError : Error {
    using Error::Error;
};

/// A matrix violates the normalization required by the operation
/// (norm above alpha, spectrum outside [-1,1], unnormalized state, ...).
struct NormalizationError : Error {
    using Error::Error;
};

/// Input violates a structural precondition (non-Hermitian, not PSD,
/// not a projector, not frustration-free, ...).
struct ValidationError : Error {
    using Error::Error;
};

/// A physical assumption of the algorithm is violated (degenerate ground state).
struct AssumptionViolation : Error {
    using Error::Error;
};

/// A configured resource ceiling was hit (polynomial degree cap, phase-grid cap).
struct ResourceCapError : Error {
    using Error::Error;
};

/// Scalar argument outside the operation's domain.
struct DomainError : Error {
    using Error::Error;
};

}  // namespace fidsim
