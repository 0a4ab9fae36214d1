// errors.hpp — Exception types shared across the library

#pragma once

#include <stdexcept>
#include <string>

namespace trilind {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Truncation bounds below the minimum (n_max < 1) or otherwise unusable.
struct TruncationError : Error {
    using Error::Error;
};

// Operands live on different Hilbert spaces, or a subsystem is not applicable.
struct DimensionError : Error {
    using Error::Error;
};

// Fock/basis index outside the truncated space.
struct IndexError : Error {
    using Error::Error;
};

// g2 requested for a mode with vanishing occupation.
struct CorrelationUndefined : Error {
    using Error::Error;
};

// Time stepping failed (step underflow, tolerance failure).
struct IntegrationError : Error {
    using Error::Error;
};

// Linear solve for the stationary state failed or did not converge.
struct SolverError : Error {
    using Error::Error;
};

// Configuration text is malformed or violates the schema.
struct ConfigError : Error {
    using Error::Error;
};

} // namespace trilind
