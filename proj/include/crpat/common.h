#pragma once
// Shared scalar types, error categories and the global tolerance.

#include <complex>
#include <stdexcept>
#include <string>

namespace crpat {

using Complex = std::complex<double>;

// Input data violates a structural precondition.
struct validation_error : std::runtime_error {
    explicit validation_error(const std::string& msg) : std::runtime_error(msg) {}
};

// An algorithm failed numerically (divergence, conditioning, conflicts).
struct numeric_error : std::runtime_error {
    explicit numeric_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Relative tolerance for algebraic identities in double precision.
// Overridable through the CRPAT_TOL environment variable.
double default_tol();

constexpr double kPi = 3.14159265358979323846;

}  // namespace crpat
