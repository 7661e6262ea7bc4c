#pragma once

#include <stdexcept>
#include <string>

namespace bures {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the operation.
class DomainError : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public DomainError {
public:
    using DomainError::DomainError;
};

/// The fixed-state spectrum has (numerically) coinciding eigenvalues; use
/// `analytic::perturbed_limit` or the pure / maximally-mixed closed forms.
class DegenerateSpectrum : public DomainError {
public:
    using DomainError::DomainError;
};

/// A numerical procedure did not reach its tolerance.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double achieved_error)
        : Error(what + " (achieved error estimate " + std::to_string(achieved_error) + ")"),
          achieved_error_(achieved_error) {}

    double achieved_error() const noexcept { return achieved_error_; }

private:
    double achieved_error_;
};

/// An internal consistency check (normalization, identity) failed.
class ConsistencyError : public Error {
public:
    using Error::Error;
};

}  // namespace bures
