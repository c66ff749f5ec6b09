#pragma once

#include <stdexcept>
#include <string>

namespace krylow {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Bad arguments, shape mismatches, violated preconditions. CLI exit code 1.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Iterative process failed to converge, loss of accuracy. CLI exit code 2.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Scalar function evaluated outside its domain (e.g. log of a nonpositive
/// eigenvalue).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Malformed input file; carries a 1-based line number when known.
class ParseError : public Error {
public:
    ParseError(const std::string& msg, long line = 0)
        : Error(line > 0 ? msg + " (line " + std::to_string(line) + ")" : msg),
          line_(line) {}
    long line() const { return line_; }

private:
    long line_;
};

/// A requested computation exceeds a configured resource cap.
class ResourceError : public Error {
public:
    using Error::Error;
};

}  // namespace krylow
