#include "doctest.h"
#include "test_util.h"

#include "crpat/fixtures.h"
#include "crpat/solver.h"

using namespace crpat;

TEST_CASE("two by two torus at a generic parameter point") {
    auto F = regular_torus_fixture(2, 2);
    AffineFamilyPoint P = solve_pattern(F.surface, *F.theta, 0.5, -0.3);
    CHECK(P.residual <= 1e-12);
    CHECK(P.iterations <= 25);
    CHECK(P.cls.type == HolonomyType::TypeII);

    CHECK(capprox(P.modulus.h1, Complex(0.5, 0.626634495), 2e-6));
    CHECK(capprox(P.modulus.h2, Complex(-0.3, 0.740550017), 2e-6));
    CHECK(capprox(P.modulus.tau, Complex(0.488670391, 0.868664588), 2e-6));
    CHECK(std::abs(std::real(P.modulus.h1) - 0.5) <= 1e-8);
    CHECK(std::abs(std::real(P.modulus.h2) + 0.3) <= 1e-8);
    CHECK(std::imag(P.modulus.tau) > 0.0);

    // the 2 to 1 symmetry of the parameter plane
    AffineFamilyPoint Q = solve_pattern(F.surface, *F.theta, -0.5, 0.3);
    CHECK((P.X - Q.X).lpNorm<Eigen::Infinity>() <= 1e-8);
    CHECK(capprox(P.modulus.tau, Q.modulus.tau, 1e-8));
}

TEST_CASE("multiplier along one generator only") {
    auto F = regular_torus_fixture(2, 2);
    AffineFamilyPoint P = solve_pattern(F.surface, *F.theta, 1.0, 0.0);
    CHECK(P.cls.type == HolonomyType::TypeII);
    CHECK(std::abs(std::log(std::abs(P.cls.alpha[0])) - 1.0) <= 1e-7);
}

TEST_CASE("euclidean point of the family") {
    auto F = regular_torus_fixture(2, 2);
    AffineFamilyPoint P = solve_pattern(F.surface, *F.theta, 0.0, 0.0);
    CHECK(P.residual <= 1e-12);
    CHECK(P.X.lpNorm<Eigen::Infinity>() <= 1e-9);
    CHECK(P.cls.type == HolonomyType::TypeI);
    CHECK(P.modulus.euclidean);
    CHECK(capprox(P.modulus.tau, Complex(0.5, 0.8660254037844386), 1e-9));
}

TEST_CASE("warm starts shorten the path") {
    auto F = regular_torus_fixture(2, 2);
    AffineFamilyPoint P = solve_pattern(F.surface, *F.theta, 0.5, -0.3);
    SolveOptions opt;
    opt.x0 = P.X;
    AffineFamilyPoint Q = solve_pattern(F.surface, *F.theta, 0.5, -0.3, opt);
    CHECK(Q.iterations <= 2);
}

TEST_CASE("bad angle structures are rejected before solving") {
    auto F = regular_torus_fixture(2, 2);
    AngleStructure half{std::vector<double>(F.surface.num_edges, kPi / 2.0)};
    CHECK_THROWS_AS(solve_pattern(F.surface, half, 0.0, 0.0), validation_error);
    CHECK_THROWS_AS(solve_pattern(jessen().surface, *F.theta, 0.0, 0.0),
                    validation_error);
}

TEST_CASE("icosahedral sphere pattern") {
    auto F = icosahedron_sphere();
    SphereSolveResult R = solve_sphere_pattern(F.surface, *F.theta);
    CHECK(R.residual <= 1e-12);
    // full symmetry forces equal moduli on every edge
    CHECK(R.X.lpNorm<Eigen::Infinity>() <= 1e-12);

    SolveOptions opt;
    opt.x0 = Eigen::VectorXd::Constant(F.surface.num_edges, 0.25);
    SphereSolveResult R2 = solve_sphere_pattern(F.surface, *F.theta, opt);
    CHECK((R2.X - R.X).lpNorm<Eigen::Infinity>() <= 1e-9);
}

TEST_CASE("rigidity probe finds one solution") {
    auto F = regular_torus_fixture(1, 1);
    RigidityReport R = rigidity_check(F.surface, *F.theta, 0.4, 0.2, 3);
    CHECK(R.consistent);
    CHECK(R.max_cr_deviation <= 1e-7);
    CHECK(R.max_radius_ratio_deviation <= 1e-7);
    REQUIRE(R.residuals.size() == 3);
    for (double r : R.residuals) CHECK(r <= 1e-12);
}

TEST_CASE("small covering scan is injective away from the symmetry") {
    auto F = regular_torus_fixture(1, 1);
    ScanResult R = covering_scan(F.surface, *F.theta, 3, 0.6);
    REQUIRE(R.tau.size() == 9);
    CHECK(R.extra_duplicates.empty());
    CHECK(R.min_nonzero_det > 1e-6);
    // mirrored parameters give the same modulus
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            CHECK(capprox(R.tau[i * 3 + j], R.tau[(2 - i) * 3 + (2 - j)], 1e-8));
}
