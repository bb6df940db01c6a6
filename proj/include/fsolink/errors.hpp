#pragma once

#include <stdexcept>
#include <string>

namespace fsolink {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A value violates a documented invariant. `field()` names the offending
/// parameter using its dotted scenario path when one is known.
class ValidationError : public Error {
public:
    ValidationError(std::string field, const std::string& what)
        : Error(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// Malformed input text (scenario JSON, CSV).
class ParseError : public Error {
public:
    using Error::Error;
};

/// Observer and target closer than the pointing solution can resolve.
class CoincidentPointsError : public Error {
public:
    using Error::Error;
};

/// An iterative search failed to meet its tolerance.
class NonConvergenceError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace fsolink
