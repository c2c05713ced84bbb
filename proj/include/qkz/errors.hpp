#ifndef QKZ_ERRORS_HPP
#define QKZ_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qkz {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// evaluation at (or too close to) a pole of a gamma factor or rational function
struct PoleError : Error {
    using Error::Error;
};

// input outside the admissible parameter / argument domain
struct DomainError : Error {
    using Error::Error;
};

// the real-line integral does not converge (decay rate non-positive)
struct DivergentIntegralError : Error {
    using Error::Error;
};

struct NoConvergenceError : Error {
    using Error::Error;
};

// degenerate parameters: lattice collision, resonant exponent, b0 zero where
// a nonzero value is required
struct GenericityError : Error {
    using Error::Error;
};

// a rational function left the admitted pole class
struct ClassViolationError : Error {
    using Error::Error;
};

struct ShapeError : Error {
    using Error::Error;
};

struct FitError : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

} // namespace qkz

#endif
