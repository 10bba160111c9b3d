// errors.hpp -- exception taxonomy for the lattice determinant laboratory.
//
// Every failure mode that callers are expected to handle programmatically has
// its own type; the CLI maps them onto stable process exit codes:
//
//     exit 2  flag / usage errors            (FlagError, parse failures)
//     exit 3  zero eigenvalue without flag   (ZeroEigenvalue)
//     exit 4  numerical failure              (QuadratureFailure, IllConditioned, ...)
//     exit 5  verification assertion failed  (handled by the CLI, not thrown here)
#pragma once

#include <stdexcept>
#include <string>

namespace lapzeta {

// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A zero eigenvalue was encountered by a log-determinant without the
// exclude-zero-modes flag (massless free/periodic lattices have exactly one
// zero mode, at the all-zero momentum).
struct ZeroEigenvalue : Error {
    using Error::Error;
};

// Reserved: a summation was requested over an empty spectrum.  The library's
// policy is that an empty product has determinant 1 (log-determinant 0), so
// this is never thrown by logdet_exact; the type exists so callers can write
// exhaustive handlers against the documented error surface.
struct EmptySpectrum : Error {
    using Error::Error;
};

// Adaptive quadrature could not reach the requested tolerance within its
// subdivision budget.
struct QuadratureFailure : Error {
    using Error::Error;
};

// Least-squares basis matrix condition number exceeded 1e12.
struct IllConditioned : Error {
    using Error::Error;
};

// Fewer than 2x as many samples as basis columns.
struct InsufficientSamples : Error {
    using Error::Error;
};

// Small-mass Taylor expansion requested beyond its convergence window
// (order must be <= d-1; the order-d remainder integral diverges).
struct OrderTooHigh : Error {
    using Error::Error;
};

// Exact enumeration requested for a lattice too large to brute-force.
struct TooLarge : Error {
    using Error::Error;
};

// Theta functions require t > 0.
struct NonPositiveT : Error {
    using Error::Error;
};

// The Dirichlet box heat trace is defined massless only.
struct MassNotSupported : Error {
    using Error::Error;
};

// The massive torus zeta determinant requires m > 0.
struct ZeroMass : Error {
    using Error::Error;
};

// CLI-level usage error (bad flag combination, malformed grid string, ...).
struct FlagError : Error {
    using Error::Error;
};

}  // namespace lapzeta
