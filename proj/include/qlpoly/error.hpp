#pragma once

#include <stdexcept>
#include <string>

namespace qlpoly {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input document (JSON syntax, unknown keys, bad references).
class ParseError : public Error {
public:
    using Error::Error;
};

/// Argument outside an operation's domain (angle range, dimensions, names).
class DomainError : public Error {
public:
    using Error::Error;
};

/// A numeric precondition on an operator failed.
class OperatorError : public Error {
public:
    using Error::Error;
};

class NonInvertible : public OperatorError {
public:
    using OperatorError::OperatorError;
};

class NotSelfAdjoint : public OperatorError {
public:
    using OperatorError::OperatorError;
};

class NotCommuting : public OperatorError {
public:
    NotCommuting(std::size_t first, std::size_t second, double norm)
        : OperatorError("operators " + std::to_string(first) + " and " + std::to_string(second) +
                        " do not commute (commutator norm " + std::to_string(norm) + ")"),
          first_(first), second_(second), norm_(norm) {}

    std::size_t first() const noexcept { return first_; }
    std::size_t second() const noexcept { return second_; }
    double norm() const noexcept { return norm_; }

private:
    std::size_t first_;
    std::size_t second_;
    double norm_;
};

class NotDensityOperator : public OperatorError {
public:
    using OperatorError::OperatorError;
};

/// Raised when an stq-cheat inverse is requested outside a monotone regime.
class NonMonotone : public DomainError {
public:
    NonMonotone(double left, double right)
        : DomainError("stq transform is not monotone between samples " + std::to_string(left) +
                      " and " + std::to_string(right)),
          left_(left), right_(right) {}

    double left() const noexcept { return left_; }
    double right() const noexcept { return right_; }

private:
    double left_;
    double right_;
};

}  // namespace qlpoly
