#pragma once

#include <stdexcept>
#include <string>

namespace loglab {

/// Thrown when an argument lies outside the mathematical domain of an
/// operation (negative t, invalid exponent, point outside a transform's
/// validity interval, ...).
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Thrown when an iterative method exhausts its budget or a bracketing
/// search finds no sign change.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace loglab
