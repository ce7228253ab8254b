#include "doctest.h"
#include "test_util.h"

#include <cmath>

using namespace crpat;

namespace {
const Complex I(0.0, 1.0);
}

TEST_CASE("cross ratio of a square is one") {
    CHECK(capprox(cross_ratio(ExtComplex(0.0, 0.0), ExtComplex(1.0, 1.0),
                              ExtComplex(0.0, 1.0), ExtComplex(1.0, 0.0)),
                  1.0, 1e-14));
}

TEST_CASE("cross ratio of a rhombus pair of equilateral triangles") {
    Complex w = std::polar(1.0, kPi / 3.0);
    ExtComplex zi(0.0, 0.0), zj(1.0, 0.0);
    ExtComplex zk(std::conj(w)), zl(w);
    // k is the third corner of the face containing i->j, so it lies below
    CHECK(capprox(cross_ratio(zi, zj, ExtComplex(w), ExtComplex(std::conj(w))), w, 1e-14));
    // swapping the two faces inverts nothing: the cross ratio is symmetric
    CHECK(capprox(cross_ratio(zj, zi, ExtComplex(std::conj(w)), ExtComplex(w)), w, 1e-14));
    (void)zk;
    (void)zl;
}

TEST_CASE("infinite argument limits") {
    ExtComplex zi(0.2, -0.3), zj(1.4, 0.5), zk(-0.7, 0.9), zl(0.1, -1.2);
    Complex finite = cross_ratio(zi, zj, zk, zl);

    // limit formulas, checked against the finite value through a Moebius map
    // sending a generic point to infinity
    CHECK(capprox(cross_ratio(ExtComplex::infinity(), zj, zk, zl),
                  (zl.z - zj.z) / (zj.z - zk.z), 1e-14));
    CHECK(capprox(cross_ratio(zi, ExtComplex::infinity(), zk, zl),
                  (zk.z - zi.z) / (zi.z - zl.z), 1e-14));
    CHECK(capprox(cross_ratio(zi, zj, ExtComplex::infinity(), zl),
                  (zl.z - zj.z) / (zi.z - zl.z), 1e-14));
    CHECK(capprox(cross_ratio(zi, zj, zk, ExtComplex::infinity()),
                  (zk.z - zi.z) / (zj.z - zk.z), 1e-14));

    for (int which = 0; which < 4; ++which) {
        std::array<ExtComplex, 4> p{zi, zj, zk, zl};
        // conjugate by the map sending p[which] to infinity
        MoebiusMap M{0.0, 1.0, 1.0, -p[which].z};
        std::array<ExtComplex, 4> q;
        for (int t = 0; t < 4; ++t) q[t] = M.apply(p[t]);
        CHECK(capprox(cross_ratio(q[0], q[1], q[2], q[3]), finite, 1e-10));
    }
}

TEST_CASE("cross ratio is Moebius invariant") {
    MoebiusMap M{Complex(1.2, 0.3), Complex(-0.5, 1.0), Complex(0.4, -0.2),
                 Complex(0.9, 0.1)};
    ExtComplex zi(0.2, -0.3), zj(1.4, 0.5), zk(-0.7, 0.9), zl(0.1, -1.2);
    Complex before = cross_ratio(zi, zj, zk, zl);
    Complex after = cross_ratio(M.apply(zi), M.apply(zj), M.apply(zk), M.apply(zl));
    CHECK(capprox(before, after, 1e-10));
}

TEST_CASE("solve_fourth_point inverts cross_ratio") {
    ExtComplex zi(0.2, -0.3), zj(1.4, 0.5), zk(-0.7, 0.9), zl(0.1, -1.2);
    Complex cr = cross_ratio(zi, zj, zk, zl);
    CHECK(xapprox(solve_fourth_point(cr, zi, zj, zk), zl, 1e-12));

    // each infinite participant
    Complex cr1 = cross_ratio(ExtComplex::infinity(), zj, zk, zl);
    CHECK(xapprox(solve_fourth_point(cr1, ExtComplex::infinity(), zj, zk), zl, 1e-12));
    Complex cr2 = cross_ratio(zi, ExtComplex::infinity(), zk, zl);
    CHECK(xapprox(solve_fourth_point(cr2, zi, ExtComplex::infinity(), zk), zl, 1e-12));
    Complex cr3 = cross_ratio(zi, zj, ExtComplex::infinity(), zl);
    CHECK(xapprox(solve_fourth_point(cr3, zi, zj, ExtComplex::infinity()), zl, 1e-12));
    Complex cr4 = cross_ratio(zi, zj, zk, ExtComplex::infinity());
    CHECK(solve_fourth_point(cr4, zi, zj, zk).is_inf());
}

TEST_CASE("moebius_through three points") {
    std::array<ExtComplex, 3> src{ExtComplex(0.0, 0.0), ExtComplex(1.0, 0.0),
                                  ExtComplex::infinity()};
    std::array<ExtComplex, 3> dst{ExtComplex(0.0, 1.0), ExtComplex(2.0, 0.0),
                                  ExtComplex(3.0, -1.0)};
    MoebiusMap M = moebius_through(src, dst);
    for (int t = 0; t < 3; ++t) CHECK(xapprox(M.apply(src[t]), dst[t], 1e-12));
    CHECK(capprox(M.det(), 1.0, 1e-12));
}

TEST_CASE("composition order applies the right factor first") {
    MoebiusMap S{2.0, 0.0, 0.0, 1.0};  // z -> 2z
    MoebiusMap T{1.0, 1.0, 0.0, 1.0};  // z -> z + 1
    // S after T
    CHECK(xapprox(S.compose(T).apply(ExtComplex(1.0, 0.0)), ExtComplex(4.0, 0.0), 1e-14));
    CHECK(xapprox(T.compose(S).apply(ExtComplex(1.0, 0.0)), ExtComplex(3.0, 0.0), 1e-14));
}

TEST_CASE("fixed points") {
    MoebiusMap translate{1.0, 1.0, 0.0, 1.0};
    auto fp = fixed_points(translate);
    REQUIRE(fp.size() == 1);
    CHECK(fp[0].is_inf());

    MoebiusMap scale{2.0, 0.0, 0.0, 1.0};
    fp = fixed_points(scale);
    REQUIRE(fp.size() == 2);
    bool zero = fp[0].is_inf() ? xapprox(fp[1], ExtComplex(0.0, 0.0))
                               : xapprox(fp[0], ExtComplex(0.0, 0.0));
    bool inf = fp[0].is_inf() || fp[1].is_inf();
    CHECK(zero);
    CHECK(inf);

    CHECK(fixed_points(MoebiusMap::identity()).empty());
}

TEST_CASE("sign equality in PSL2") {
    MoebiusMap M{Complex(1.2, 0.3), Complex(-0.5, 1.0), Complex(0.4, -0.2),
                 Complex(0.9, 0.1)};
    MoebiusMap N{-M.a, -M.b, -M.c, -M.d};
    CHECK(approx_equal_up_to_sign(M, N, 1e-14));
    CHECK(!approx_equal_up_to_sign(M, MoebiusMap::identity(), 1e-6));
}

TEST_CASE("circumcircle of a right triangle") {
    Circumcircle cc =
        circumcircle(ExtComplex(0.0, 0.0), ExtComplex(1.0, 0.0), ExtComplex(0.0, 1.0));
    REQUIRE(!cc.is_line);
    CHECK(capprox(cc.center, Complex(0.5, 0.5), 1e-13));
    CHECK(cc.radius == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
    CHECK(cc.orientation == 1);
}

TEST_CASE("circumcircle of an equilateral triangle") {
    Circumcircle cc = circumcircle(ExtComplex(0.0, 0.0), ExtComplex(1.0, 0.0),
                                   ExtComplex(0.5, 0.8660254037844386));
    REQUIRE(!cc.is_line);
    CHECK(capprox(cc.center, Complex(0.5, 0.28867513459481287), 1e-12));
    CHECK(cc.radius == doctest::Approx(0.5773502691896258).epsilon(1e-12));
    CHECK(cc.orientation == 1);

    // clockwise triple
    Circumcircle cw = circumcircle(ExtComplex(0.0, 0.0),
                                   ExtComplex(0.5, 0.8660254037844386), ExtComplex(1.0, 0.0));
    CHECK(cw.orientation == -1);
}

TEST_CASE("collinear points give a line") {
    Circumcircle cc =
        circumcircle(ExtComplex(0.0, 0.0), ExtComplex(1.0, 0.0), ExtComplex(2.0, 0.0));
    CHECK(cc.is_line);
    CHECK(std::abs(std::imag(cc.line_dir)) < 1e-12);

    Circumcircle ci = circumcircle(ExtComplex::infinity(), ExtComplex(1.0, 0.0),
                                   ExtComplex(2.0, 0.0));
    CHECK(ci.is_line);
}

TEST_CASE("stereographic projection from the top of the sphere") {
    const double r5 = std::sqrt(5.0);
    CHECK(xapprox(stereographic({1.0, -2.0, 0.0}, {0.0, 0.0, r5}),
                  ExtComplex(1.0, -2.0), 1e-13));
    CHECK(stereographic({0.0, 0.0, r5}, {0.0, 0.0, r5}).is_inf());
    CHECK(xapprox(stereographic({0.0, 0.0, -r5}, {0.0, 0.0, r5}), ExtComplex(0.0, 0.0),
                  1e-13));
}
