#include "crpat/moebius.h"

#include <algorithm>
#include <cmath>

namespace crpat {

namespace {

double abs2(Complex w) { return std::norm(w); }

bool same_point(const ExtComplex& a, const ExtComplex& b) {
    if (a.is_inf() || b.is_inf()) return a.is_inf() && b.is_inf();
    return a.z == b.z;
}

void require_distinct(const ExtComplex& a, const ExtComplex& b, const char* what) {
    if (same_point(a, b)) throw validation_error(std::string("coincident points in ") + what);
}

}  // namespace

Complex ExtComplex::value() const {
    if (inf) throw validation_error("infinite point has no finite value");
    return z;
}

bool approx_equal(const ExtComplex& a, const ExtComplex& b, double tol) {
    if (a.is_inf() || b.is_inf()) return a.is_inf() && b.is_inf();
    return std::abs(a.z - b.z) <= tol * (1.0 + std::abs(a.z) + std::abs(b.z));
}

MoebiusMap MoebiusMap::normalized() const {
    Complex det = a * d - b * c;
    if (std::abs(det) < 1e-300) throw numeric_error("singular Moebius matrix");
    Complex s = std::sqrt(det);
    return MoebiusMap{a / s, b / s, c / s, d / s};
}

MoebiusMap MoebiusMap::inverse() const {
    MoebiusMap n = normalized();
    return MoebiusMap{n.d, -n.b, -n.c, n.a};
}

MoebiusMap MoebiusMap::compose(const MoebiusMap& rhs) const {
    return MoebiusMap{a * rhs.a + b * rhs.c, a * rhs.b + b * rhs.d,
                      c * rhs.a + d * rhs.c, c * rhs.b + d * rhs.d};
}

ExtComplex MoebiusMap::apply(const ExtComplex& p) const {
    if (p.is_inf()) {
        if (std::abs(c) == 0.0) return ExtComplex::infinity();
        return ExtComplex(a / c);
    }
    Complex num = a * p.z + b;
    Complex den = c * p.z + d;
    double scale = std::abs(a) + std::abs(b) + std::abs(c) + std::abs(d);
    if (std::abs(den) <= 1e-15 * scale * (1.0 + std::abs(p.z)))
        return ExtComplex::infinity();
    return ExtComplex(num / den);
}

bool MoebiusMap::is_identity(double tol) const {
    MoebiusMap n = normalized();
    double dp = std::abs(n.a - 1.0) + std::abs(n.b) + std::abs(n.c) + std::abs(n.d - 1.0);
    double dm = std::abs(n.a + 1.0) + std::abs(n.b) + std::abs(n.c) + std::abs(n.d + 1.0);
    return std::min(dp, dm) <= tol;
}

bool approx_equal_up_to_sign(const MoebiusMap& m1, const MoebiusMap& m2, double tol) {
    MoebiusMap p = m1.normalized();
    MoebiusMap q = m2.normalized();
    double dp = std::abs(p.a - q.a) + std::abs(p.b - q.b) + std::abs(p.c - q.c) +
                std::abs(p.d - q.d);
    double dm = std::abs(p.a + q.a) + std::abs(p.b + q.b) + std::abs(p.c + q.c) +
                std::abs(p.d + q.d);
    return std::min(dp, dm) <= tol;
}

std::vector<ExtComplex> fixed_points(const MoebiusMap& m, double par_tol) {
    MoebiusMap n = m.normalized();
    if (n.is_identity(1e-13)) return {};
    double scale = std::abs(n.a) + std::abs(n.b) + std::abs(n.c) + std::abs(n.d);
    if (std::abs(n.c) <= 1e-13 * scale) {
        // affine: infinity is fixed
        if (std::abs(n.a - n.d) <= 1e-13 * scale)
            return {ExtComplex::infinity()};  // translation, parabolic
        return {ExtComplex::infinity(), ExtComplex(n.b / (n.d - n.a))};
    }
    Complex tr = n.trace();
    Complex disc = tr * tr - 4.0;
    if (std::abs(disc) < par_tol)
        return {ExtComplex((n.a - n.d) / (2.0 * n.c))};
    Complex s = std::sqrt(disc);
    return {ExtComplex((n.a - n.d + s) / (2.0 * n.c)),
            ExtComplex((n.a - n.d - s) / (2.0 * n.c))};
}

Complex cross_ratio(const ExtComplex& zi, const ExtComplex& zj,
                    const ExtComplex& zk, const ExtComplex& zl) {
    int infs = zi.is_inf() + zj.is_inf() + zk.is_inf() + zl.is_inf();
    if (infs > 1) throw validation_error("cross_ratio: more than one infinite point");

    auto checked = [](Complex num, Complex den, const char* what) {
        if (den == 0.0) throw validation_error(std::string("cross_ratio degenerate: ") + what);
        Complex r = num / den;
        if (r == 0.0) throw validation_error(std::string("cross_ratio zero: ") + what);
        return r;
    };

    if (zi.is_inf()) return checked(zl.z - zj.z, zj.z - zk.z, "z_i infinite");
    if (zj.is_inf()) return checked(zk.z - zi.z, zi.z - zl.z, "z_j infinite");
    if (zk.is_inf()) return checked(zl.z - zj.z, zi.z - zl.z, "z_k infinite");
    if (zl.is_inf()) return checked(zk.z - zi.z, zj.z - zk.z, "z_l infinite");
    return checked(-(zk.z - zi.z) * (zl.z - zj.z), (zi.z - zl.z) * (zj.z - zk.z),
                   "finite points");
}

ExtComplex solve_fourth_point(Complex cr, const ExtComplex& zi,
                              const ExtComplex& zj, const ExtComplex& zk) {
    if (cr == 0.0) throw validation_error("solve_fourth_point: zero cross ratio");
    int infs = zi.is_inf() + zj.is_inf() + zk.is_inf();
    if (infs > 1) throw validation_error("solve_fourth_point: more than one infinite point");
    require_distinct(zi, zj, "solve_fourth_point");
    require_distinct(zj, zk, "solve_fourth_point");
    require_distinct(zi, zk, "solve_fourth_point");

    if (zi.is_inf()) return ExtComplex(zj.z + cr * (zj.z - zk.z));
    if (zj.is_inf()) return ExtComplex(zi.z - (zk.z - zi.z) / cr);
    if (zk.is_inf()) {
        Complex den = 1.0 + cr;
        if (den == 0.0) return ExtComplex::infinity();
        return ExtComplex((zj.z + cr * zi.z) / den);
    }
    Complex u = cr * (zj.z - zk.z);
    Complex v = zk.z - zi.z;
    Complex den = v - u;
    double scale = std::abs(u) + std::abs(v);
    if (std::abs(den) <= 1e-15 * scale) return ExtComplex::infinity();
    return ExtComplex((v * zj.z - u * zi.z) / den);
}

namespace {

// The map sending (a, b, c) to (0, 1, infinity).
MoebiusMap to_zero_one_inf(const std::array<ExtComplex, 3>& t) {
    const ExtComplex &a = t[0], &b = t[1], &c = t[2];
    require_distinct(a, b, "moebius_through");
    require_distinct(b, c, "moebius_through");
    require_distinct(a, c, "moebius_through");
    if (a.is_inf()) return MoebiusMap{0.0, b.z - c.z, 1.0, -c.z};
    if (b.is_inf()) return MoebiusMap{1.0, -a.z, 1.0, -c.z};
    if (c.is_inf()) return MoebiusMap{1.0, -a.z, 0.0, b.z - a.z};
    return MoebiusMap{b.z - c.z, -a.z * (b.z - c.z), b.z - a.z, -c.z * (b.z - a.z)};
}

}  // namespace

MoebiusMap moebius_through(const std::array<ExtComplex, 3>& src,
                           const std::array<ExtComplex, 3>& dst) {
    MoebiusMap A = to_zero_one_inf(src);
    MoebiusMap B = to_zero_one_inf(dst);
    return B.inverse().compose(A).normalized();
}

Circumcircle circumcircle(const ExtComplex& z1, const ExtComplex& z2,
                          const ExtComplex& z3) {
    int infs = z1.is_inf() + z2.is_inf() + z3.is_inf();
    if (infs > 1) throw validation_error("circumcircle: more than one infinite point");
    Circumcircle out;
    if (infs == 1) {
        // circle through infinity: the line through the two finite points
        Complex p, q;
        if (z1.is_inf()) { p = z2.z; q = z3.z; }
        else if (z2.is_inf()) { p = z1.z; q = z3.z; }
        else { p = z1.z; q = z2.z; }
        if (p == q) throw validation_error("circumcircle: coincident points");
        out.is_line = true;
        out.line_point = p;
        out.line_dir = (q - p) / std::abs(q - p);
        return out;
    }
    Complex w2 = z2.z - z1.z;
    Complex w3 = z3.z - z1.z;
    if (w2 == 0.0 || w3 == 0.0 || z2.z == z3.z)
        throw validation_error("circumcircle: coincident points");
    double cross = std::imag(std::conj(w2) * w3);
    double scale2 = abs2(w2) + abs2(w3);
    if (std::abs(cross) <= 1e-14 * scale2) {
        out.is_line = true;
        out.line_point = z1.z;
        out.line_dir = w2 / std::abs(w2);
        return out;
    }
    Complex num = abs2(w2) * w3 - abs2(w3) * w2;
    out.center = z1.z + num / (Complex(0.0, 2.0) * cross);
    out.radius = std::abs(out.center - z1.z);
    out.orientation = cross > 0.0 ? 1 : -1;
    return out;
}

ExtComplex stereographic(const std::array<double, 3>& p,
                         const std::array<double, 3>& pole) {
    auto dot = [](const std::array<double, 3>& u, const std::array<double, 3>& v) {
        return u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
    };
    double R = std::sqrt(dot(pole, pole));
    if (R == 0.0) throw validation_error("stereographic: zero pole");
    double r = std::sqrt(dot(p, p));
    if (std::abs(r - R) > 1e-9 * R)
        throw validation_error("stereographic: point not on the sphere");
    std::array<double, 3> n = {pole[0] / R, pole[1] / R, pole[2] / R};
    double pn = dot(p, n);
    if (std::abs(R - pn) <= 1e-12 * R) return ExtComplex::infinity();

    std::array<double, 3> axis = {1.0, 0.0, 0.0};
    if (std::abs(n[0]) >= 0.9) axis = {0.0, 1.0, 0.0};
    double an = dot(axis, n);
    std::array<double, 3> e1 = {axis[0] - an * n[0], axis[1] - an * n[1], axis[2] - an * n[2]};
    double e1n = std::sqrt(dot(e1, e1));
    e1 = {e1[0] / e1n, e1[1] / e1n, e1[2] / e1n};
    std::array<double, 3> e2 = {n[1] * e1[2] - n[2] * e1[1], n[2] * e1[0] - n[0] * e1[2],
                                n[0] * e1[1] - n[1] * e1[0]};

    double t = R / (R - pn);
    std::array<double, 3> x = {pole[0] + t * (p[0] - pole[0]),
                               pole[1] + t * (p[1] - pole[1]),
                               pole[2] + t * (p[2] - pole[2])};
    return ExtComplex(dot(x, e1), dot(x, e2));
}

}  // namespace crpat
