#pragma once

#include <stdexcept>
#include <string>

namespace rlw {

/// Base class of all errors thrown by this library.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid user-facing configuration (grid sizes, scheme tags, time steps, ...).
struct ConfigError : Error {
    using Error::Error;
};

/// Mixing fields from incompatible grids, or an axis that does not exist.
struct DimensionError : Error {
    using Error::Error;
};

/// Iterative linear solve did not reach the requested tolerance.
struct SolverError : Error {
    SolverError(const std::string& what, double residual_, int iterations_)
        : Error(what), residual(residual_), iterations(iterations_) {}
    double residual;
    int iterations;
};

/// NaN/Inf appeared during explicit prediction sweeps (time step too large).
struct DivergenceError : Error {
    using Error::Error;
};

/// Nonlinear startup iteration stalled above tolerance.
struct StartupError : Error {
    using Error::Error;
};

/// Malformed input file; `line` is 1-based.
struct ParseError : Error {
    ParseError(const std::string& what, int line_) : Error(what), line(line_) {}
    int line;
};

/// Violated internal contract (programming error, not user input).
struct InternalError : Error {
    using Error::Error;
};

}  // namespace rlw
