#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ddestab {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed expression text. `offset()` is the byte position of the problem.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : Error(what + " at offset " + std::to_string(offset)), offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// Expression evaluation produced a pole or a non-finite value.
class EvalError : public Error {
public:
    using Error::Error;
};

/// A precondition on numeric inputs was violated (e.g. delta outside (0,2)).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Invalid model construction: bad parameters, nonzero equilibrium residual.
class ModelError : public Error {
public:
    using Error::Error;
};

/// A delay function returned g(t) > t, or exceeded its declared lag bound.
class DelayViolation : public Error {
public:
    using Error::Error;
};

/// Malformed or unknown keys in a JSON configuration document.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Not enough signal in a trajectory window to fit a decay rate.
class InsufficientData : public Error {
public:
    using Error::Error;
};

}  // namespace ddestab
