#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace downclose {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed textual input. Carries the 1-based line number when known (0 otherwise).
class ParseError : public Error {
public:
    ParseError(const std::string& msg, std::size_t line = 0)
        : Error(line == 0 ? msg : "line " + std::to_string(line) + ": " + msg), line_(line) {}

    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// An operation was called outside its precondition (empty language, unreduced input, ...).
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// A configured resource cap (enumeration size, expansion length, state count) was exceeded.
class CapExceeded : public Error {
public:
    using Error::Error;
};

/// Violated internal invariant. Indicates a bug, never bad input.
class InternalError : public Error {
public:
    using Error::Error;
};

} // namespace downclose
