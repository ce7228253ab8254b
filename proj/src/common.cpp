#include "crpat/common.h"

#include <cstdlib>

namespace crpat {

double default_tol() {
    static const double tol = [] {
        if (const char* s = std::getenv("CRPAT_TOL")) {
            char* end = nullptr;
            double v = std::strtod(s, &end);
            if (end != s && v > 0.0) return v;
        }
        return 1e-10;
    }();
    return tol;
}

}  // namespace crpat
