#pragma once

#include <stdexcept>
#include <string>

namespace casimir {

/// Argument outside the domain of an operation (negative Airy argument,
/// positions outside a Green's function region, invalid plate geometry).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A quadrature or cutoff search did not reach the requested tolerance.
class ToleranceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Vanishing denominator in a closed-form ratio.
class SingularityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Failure inside the finite-difference / ODE verification layer. This is a
/// test-infrastructure fault, not a physics result.
class OracleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input file (CSV rows, cache contents).
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace casimir
