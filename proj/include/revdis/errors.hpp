#pragma once

// Exception taxonomy. Everything thrown by the library derives from Error.
// ConfigError marks bad user input (CLI exit code 2); all other failures map
// to exit code 1.

#include <stdexcept>
#include <string>

namespace revdis {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// dimension or shape violation (non-square operator, joint limit exceeded)
struct DimensionError : Error {
    using Error::Error;
};

// a Fock truncation cannot hold the requested state to the required tail
// mass; carries the smallest adequate truncation
struct TruncationError : Error {
    int required_min;
    TruncationError(const std::string& what, int required)
        : Error(what), required_min(required) {}
};

// argument outside the mathematical domain of the operation
struct DomainError : Error {
    using Error::Error;
};

// ill-formed model: non-Hermitian Hamiltonian, negative rate, bad params
struct ModelError : Error {
    using Error::Error;
};

// generator admits no decaying steady state (absorption >= emission)
struct StabilityError : Error {
    using Error::Error;
};

// Liouvillian kernel is not one-dimensional
struct DegenerateSteadyStateError : Error {
    using Error::Error;
};

// adaptive integrator step-size underflow
struct StiffnessError : Error {
    using Error::Error;
};

// linear solve failed or produced an unusable residual
struct SolveError : Error {
    using Error::Error;
};

// nonlinear least squares failed to converge
struct FitError : Error {
    using Error::Error;
};

// measured data incompatible with the physical model (below noise floor)
struct InconsistentInputError : Error {
    using Error::Error;
};

// unreadable, ill-typed, or out-of-range configuration
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace revdis
