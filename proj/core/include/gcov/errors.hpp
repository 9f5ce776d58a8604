#pragma once

#include <stdexcept>
#include <string>

namespace gcov {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class LagTooLarge : public Error {
public:
    using Error::Error;
};

/// A component series has (numerically) zero variance.
class DegenerateSeries : public Error {
public:
    using Error::Error;
};

/// A lag-0 covariance matrix is singular or nearly so.
class IllConditioned : public Error {
public:
    using Error::Error;
};

class ShapeMismatch : public Error {
public:
    using Error::Error;
};

class TooShort : public Error {
public:
    using Error::Error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class UnknownModel : public Error {
public:
    using Error::Error;
};

class NoConvergence : public Error {
public:
    using Error::Error;
};

/// Finite-difference stencil would leave the parameter box.
class BoundaryTheta : public Error {
public:
    using Error::Error;
};

/// The information matrix has rank below dim(theta).
class SingularOmega : public Error {
public:
    using Error::Error;
};

/// An autoregressive polynomial has a root on or inside the unit circle.
class ExplosivePolynomial : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& msg, long line, long column)
        : Error(msg), line_(line), column_(column) {}

    long line() const { return line_; }
    long column() const { return column_; }

private:
    long line_;
    long column_;
};

class EmptyInput : public Error {
public:
    using Error::Error;
};

}  // namespace gcov
