#pragma once

#include <stdexcept>
#include <string>

namespace kronecker {

/// Argument outside the domain of an operation (poles, invalid points, ...).
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

/// Argument sits on (or numerically too close to) a pole.
struct PoleError : DomainError {
    using DomainError::DomainError;
};

/// Two divisor supports share a point, or a point collides with a pole/zero.
struct SupportCollision : DomainError {
    using DomainError::DomainError;
};

/// A series, iteration or extrapolation failed to converge.
struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// An enumeration would exceed its memory guard.
struct ResourceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A consistency check performed before using derived data failed.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace kronecker
