#pragma once
// Moebius transformations, cross ratios, circumcircles and stereographic
// projection on the extended complex plane.

#include <array>
#include <vector>

#include "crpat/common.h"

namespace crpat {

// A point of the Riemann sphere: a finite complex number or infinity.
struct ExtComplex {
    Complex z{0.0, 0.0};
    bool inf = false;

    ExtComplex() = default;
    ExtComplex(Complex w) : z(w), inf(false) {}
    ExtComplex(double x, double y) : z(x, y), inf(false) {}

    static ExtComplex infinity() {
        ExtComplex p;
        p.inf = true;
        return p;
    }
    bool is_inf() const { return inf; }
    Complex value() const;  // throws on infinity
};

bool approx_equal(const ExtComplex& a, const ExtComplex& b, double tol);

// z -> (a z + b) / (c z + d), kept with a d - b c = 1 up to sign.
struct MoebiusMap {
    Complex a{1.0}, b{0.0}, c{0.0}, d{1.0};

    static MoebiusMap identity() { return MoebiusMap{}; }
    Complex det() const { return a * d - b * c; }
    Complex trace() const { return a + d; }
    MoebiusMap normalized() const;  // det scaled to 1, throws if singular
    MoebiusMap inverse() const;
    MoebiusMap compose(const MoebiusMap& rhs) const;  // apply rhs first, then this
    ExtComplex apply(const ExtComplex& p) const;
    bool is_identity(double tol) const;
};

// Equality in PSL(2, C): matrices may differ by a global sign.
bool approx_equal_up_to_sign(const MoebiusMap& m1, const MoebiusMap& m2, double tol);

// Fixed points on the sphere. One entry for parabolic maps, two otherwise;
// empty for the identity. Uses |trace^2 - 4| < par_tol to detect parabolics.
std::vector<ExtComplex> fixed_points(const MoebiusMap& m, double par_tol = 1e-12);

// Cross ratio of the corner positions around an edge ij, with k the third
// corner of the face containing i->j and l the third corner of the face
// containing j->i:
//   -(z_k - z_i)(z_l - z_j) / ((z_i - z_l)(z_j - z_k))
// At most one argument may be infinite; the value is the continuous limit.
Complex cross_ratio(const ExtComplex& zi, const ExtComplex& zj,
                    const ExtComplex& zk, const ExtComplex& zl);

// Recovers z_l from the cross ratio and the other three positions.
ExtComplex solve_fourth_point(Complex cr, const ExtComplex& zi,
                              const ExtComplex& zj, const ExtComplex& zk);

// The unique Moebius map sending src[i] -> dst[i] for three distinct points.
MoebiusMap moebius_through(const std::array<ExtComplex, 3>& src,
                           const std::array<ExtComplex, 3>& dst);

struct Circumcircle {
    bool is_line = false;
    Complex center{0.0};     // circle case
    double radius = 0.0;
    int orientation = 0;     // +1 if the triple runs counterclockwise, -1 clockwise
    Complex line_point{0.0}; // line case: a point on the line and a unit direction
    Complex line_dir{1.0};
};

Circumcircle circumcircle(const ExtComplex& z1, const ExtComplex& z2,
                          const ExtComplex& z3);

// Projects a point of the sphere |p| = R from `pole` (also of length R) onto
// the plane through the origin orthogonal to the pole.
ExtComplex stereographic(const std::array<double, 3>& p,
                         const std::array<double, 3>& pole);

}  // namespace crpat
