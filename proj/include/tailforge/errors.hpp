#pragma once

#include <stdexcept>
#include <string>

namespace tailforge {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A constructor or operation parameter violates its stated constraint.
class ParameterError : public Error {
public:
    using Error::Error;
};

/// Argument outside the domain of the operation (e.g. x beyond truncation).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Query reaches past the materialized part of an infinite construction.
class TruncationError : public Error {
public:
    using Error::Error;
};

/// An integral that was requested is infinite (or cannot be shown finite).
class DivergenceError : public Error {
public:
    using Error::Error;
};

/// Adaptive quadrature could not meet the requested relative tolerance.
class ToleranceError : public Error {
public:
    ToleranceError(const std::string& what, double achieved_rel_error)
        : Error(what), achieved_(achieved_rel_error) {}
    double achieved_rel_error() const noexcept { return achieved_; }

private:
    double achieved_;
};

/// A bracketed quantity cannot be resolved (e.g. denominator bracket touches 0).
class InconclusiveError : public Error {
public:
    using Error::Error;
};

/// Rejection sampling would accept too few draws to be useful.
class LowAcceptanceError : public Error {
public:
    using Error::Error;
};

/// Reading or writing a file failed; the message names the path.
class IoError : public Error {
public:
    using Error::Error;
};

/// A computed value left the representable range of binary64.
class NumericalError : public Error {
public:
    using Error::Error;
};

}  // namespace tailforge
