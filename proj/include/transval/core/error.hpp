#pragma once

#include <stdexcept>
#include <string>

namespace transval {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition on arguments was violated (task mismatch, p outside [0,1], ...).
class ContractError : public Error {
public:
    using Error::Error;
};

/// Requested sizes do not fit the available data.
class SizingError : public Error {
public:
    using Error::Error;
};

/// An iterative solver hit its iteration cap.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double violation)
        : Error(what), violation_(violation) {}

    /// Final KKT violation (or equivalent residual) when the solver stopped.
    double violation() const noexcept { return violation_; }

private:
    double violation_;
};

/// Malformed binary or text input.
class FormatError : public Error {
public:
    using Error::Error;
};

/// Two inputs that must agree do not (e.g. image and label counts).
class ConsistencyError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace transval
