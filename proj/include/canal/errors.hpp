#pragma once

#include <stdexcept>
#include <string>

namespace canal {

// Base of every error raised by the library. The CLI maps the subclasses to
// process exit codes (config -> 2, numeric -> 3).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Caller broke a precondition (dimension mismatch, wrong argument count).
class ContractError : public Error {
public:
    using Error::Error;
};

// Schema or value problem in a JSON configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

// Everything below is a numeric-domain failure.
class NumericError : public Error {
public:
    using Error::Error;
};

// Non-finite input, argument outside the mathematical domain, too close to
// a domain boundary.
class DomainError : public NumericError {
public:
    using NumericError::NumericError;
};

// |rho'| too close to 1: sqrt(1 - rho'^2) is not admissible.
class RegularityError : public NumericError {
public:
    using NumericError::NumericError;
};

// Curve is not regular, or a Frenet curvature vanishes without a frame override.
class DegeneracyError : public NumericError {
public:
    using NumericError::NumericError;
};

// Coordinate pole (cos v3 = 0), focal locus (Q = 0) or singular metric.
class SingularityError : public NumericError {
public:
    using NumericError::NumericError;
};

// Tangent vectors of a probe are linearly dependent.
class RankError : public NumericError {
public:
    using NumericError::NumericError;
};

class IntegrationError : public NumericError {
public:
    using NumericError::NumericError;
};

// Lattice too coarse for a stencil.
class ResolutionError : public NumericError {
public:
    using NumericError::NumericError;
};

// Two independent verification routes disagree.
class InconsistencyError : public NumericError {
public:
    using NumericError::NumericError;
};

}  // namespace canal
