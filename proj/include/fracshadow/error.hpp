#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fracshadow {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed expression text. `offset()` is the 0-based byte position of the
/// offending token; `expected()` describes what the parser wanted there.
class ParseError : public Error {
public:
    enum class Kind { syntax, unknown_identifier };

    ParseError(Kind kind, std::size_t offset, std::string expected, const std::string& message)
        : Error(message + " at offset " + std::to_string(offset)),
          kind_(kind),
          offset_(offset),
          expected_(std::move(expected)) {}

    Kind kind() const noexcept { return kind_; }
    std::size_t offset() const noexcept { return offset_; }
    const std::string& expected() const noexcept { return expected_; }

private:
    Kind kind_;
    std::size_t offset_;
    std::string expected_;
};

/// A precondition on an argument was violated (bad node count, order window, ...).
class ArgumentError : public Error {
public:
    using Error::Error;
};

/// Numerical evaluation left the domain of a function or produced a non-finite value.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Symbolic differentiation hit `abs` or `sign`.
class NonDifferentiableError : public DomainError {
public:
    using DomainError::DomainError;
};

/// The difference step of a numerical derivative would underflow.
class StepUnderflowError : public DomainError {
public:
    using DomainError::DomainError;
};

}  // namespace fracshadow
