#pragma once

#include <stdexcept>
#include <string>

namespace wstring {

// Thrown when a parameter set violates the admissibility conditions
// (non-positive couplings, or neither proportional nor decay-compatible).
struct AdmissibilityError : std::runtime_error {
    explicit AdmissibilityError(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when an evaluation point lies outside the domain an operation
// supports (too close to a string point, outside a grid, ...).
struct RangeError : std::runtime_error {
    explicit RangeError(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when an iterative numerical process fails to reach its tolerance
// (quadrature non-convergence, step-size underflow, singular linear solve).
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// Thrown for malformed run configuration (bad JSON, unknown keys,
// inconsistent numerical settings).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when a projection or fit is requested in a degenerate situation
// (vanishing pairing integrals, too few fit nodes).
struct DegeneracyError : std::runtime_error {
    explicit DegeneracyError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace wstring
