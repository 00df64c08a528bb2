#pragma once

#include <stdexcept>
#include <string>

namespace nlhopf {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain where a formula is defined.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A bifurcation point is degenerate (zero transversality, resonant
/// denominator, non-positive determinant).
class DegenerateError : public Error {
public:
    using Error::Error;
};

/// Bisection was handed an interval without a sign change.
class BracketError : public Error {
public:
    using Error::Error;
};

/// The prey density approached zero during a simulation.
class BlowUpError : public Error {
public:
    BlowUpError(const std::string& what, double time) : Error(what), time_(time) {}
    double time() const noexcept { return time_; }

private:
    double time_;
};

}  // namespace nlhopf
