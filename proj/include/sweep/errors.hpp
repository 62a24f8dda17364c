#pragma once

#include <stdexcept>
#include <string>

namespace sweep {

/// Base class for all solver errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Projection requested outside the uniqueness region of a prox-regular set
/// (distance(t,y) >= prox_const): the nearest point may be non-unique.
struct RegionViolation : Error {
    using Error::Error;
};

/// An operation required a point of C(t) but the argument is not in the set.
struct PointNotInSet : Error {
    using Error::Error;
};

/// A direction failed the proximal-normal membership test.
struct NotANormal : Error {
    using Error::Error;
};

/// Two grid functions that must share a grid do not.
struct GridMismatch : Error {
    using Error::Error;
};

/// Volterra kernel evaluated outside its domain (s > t).
struct KernelDomain : Error {
    using Error::Error;
};

/// Initial point lies outside C(T0).
struct InfeasibleInitialPoint : Error {
    using Error::Error;
};

/// Negative input passed to a bound evaluator that requires nonnegative data.
struct NegativeInput : Error {
    using Error::Error;
};

/// r0 smaller than ||x0 - q0||.
struct R0TooSmall : Error {
    using Error::Error;
};

/// Scenario / configuration parsing or consistency failure.
struct ConfigError : Error {
    using Error::Error;
};

/// A sampled hypothesis check failed during validation.
struct ValidationFailure : Error {
    using Error::Error;
};

}  // namespace sweep
