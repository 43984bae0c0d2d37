#pragma once

#include <stdexcept>
#include <string>

namespace mdpvol {

/// An input violates a documented precondition. The message names the offending parameter.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A numerical procedure failed (non-convergent quadrature, singular system, overflow).
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The requested computation has no implementation for the given model class.
class UnsupportedModelError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace mdpvol
