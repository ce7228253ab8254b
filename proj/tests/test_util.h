#pragma once
#include <complex>

#include "crpat/moebius.h"

namespace crpat {

inline bool capprox(Complex a, Complex b, double tol = 1e-10) {
    return std::abs(a - b) <= tol * (1.0 + std::abs(a) + std::abs(b));
}

inline bool xapprox(const ExtComplex& a, const ExtComplex& b, double tol = 1e-10) {
    return approx_equal(a, b, tol);
}

inline double chordal_for_test(const ExtComplex& a, const ExtComplex& b) {
    if (a.is_inf() && b.is_inf()) return 0.0;
    if (a.is_inf()) return 2.0 / std::sqrt(1.0 + std::norm(b.z));
    if (b.is_inf()) return 2.0 / std::sqrt(1.0 + std::norm(a.z));
    return 2.0 * std::abs(a.z - b.z) /
           std::sqrt((1.0 + std::norm(a.z)) * (1.0 + std::norm(b.z)));
}

inline bool chordal_equal_for_test(const ExtComplex& a, const ExtComplex& b,
                                   double tol = 1e-7) {
    return chordal_for_test(a, b) <= tol;
}

}  // namespace crpat
