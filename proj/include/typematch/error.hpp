#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace typematch {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Caller violated a precondition (bad arguments, wrong column kind, ...).
class UsageError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class EmptyTableError : public Error {
public:
    using Error::Error;
};

class NotFoundError : public Error {
public:
    using Error::Error;
};

class EmptyProfileError : public Error {
public:
    using Error::Error;
};

/// The reconciliation provider could not be reached or answered non-2xx.
/// Retrying later may succeed.
class TransportError : public Error {
public:
    using Error::Error;
};

/// The provider answered, but not in the expected wire format.
class ProtocolError : public Error {
public:
    using Error::Error;
};

} // namespace typematch
