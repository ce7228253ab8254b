#include "doctest.h"
#include "test_util.h"

#include <cmath>
#include <limits>

#include "crpat/fixtures.h"
#include "crpat/hqd.h"
#include "crpat/solver.h"

using namespace crpat;

TEST_CASE("equilateral kernel is the zero sum plane") {
    auto F = one_vertex_torus_a();
    Eigen::MatrixXd M = assemble_cr_form_real(F.surface, *F.cr);
    KernelReal K = kernel_real(M);
    CHECK(K.dim == 2);
    CHECK(K.gap >= 1e6);
    // every kernel vector sums to zero
    Eigen::VectorXd ones = Eigen::VectorXd::Ones(3);
    CHECK((K.basis.transpose() * ones).lpNorm<Eigen::Infinity>() <= 1e-12);

    KernelComplex Kc = kernel_complex(assemble_cr_form_complex(F.surface, *F.cr));
    CHECK(Kc.dim == 2);
}

TEST_CASE("one parameter family kernels") {
    SUBCASE("real parameter") {
        Complex b(2.0, 0.0);
        auto F = one_vertex_torus_b(b);
        KernelComplex Kc = kernel_complex(assemble_cr_form_complex(F.surface, *F.cr));
        REQUIRE(Kc.dim == 1);
        // the kernel line is spanned by (-(1 + b), 1, b)
        Eigen::Vector3cd expect;
        expect << -(1.0 + b), Complex(1.0), b;
        Complex scale = Kc.basis(1, 0);
        REQUIRE(std::abs(scale) > 1e-12);
        for (int e = 0; e < 3; ++e)
            CHECK(capprox(Kc.basis(e, 0) / scale, expect(e), 1e-8));

        KernelReal Kr = kernel_real(assemble_cr_form_real(F.surface, *F.cr));
        CHECK(Kr.dim == 1);
    }
    SUBCASE("complex parameter kills the real kernel") {
        auto F = one_vertex_torus_b(Complex(2.0, 1.0));
        KernelComplex Kc = kernel_complex(assemble_cr_form_complex(F.surface, *F.cr));
        CHECK(Kc.dim == 1);
        KernelReal Kr = kernel_real(assemble_cr_form_real(F.surface, *F.cr));
        CHECK(Kr.dim == 0);
        CHECK(Kr.gap == std::numeric_limits<double>::infinity());
    }
}

TEST_CASE("cotangent weights") {
    auto F = regular_torus_fixture(2, 2);
    DevelopOptions wide;
    wide.range = PatchRange{-1, 1, -1, 1};  // weights touch both faces of each edge
    DevelopingMap dev = develop(F.surface, *F.cr, wide);
    for (int e = 0; e < F.surface.num_edges; ++e)
        CHECK(cotan_weight(F.surface, dev, e) ==
              doctest::Approx(2.0 / std::sqrt(3.0)).epsilon(1e-10));

    auto L = four_eight_lattice();
    DevelopingMap devL;
    devL.pos.insert(L.positions.begin(), L.positions.end());
    for (int e = 0; e < L.surface.num_edges; ++e) {
        int h = L.surface.edge_rep[e];
        Complex dz = L.positions.at(L.surface.dest_lift(h, {0, 0})).z -
                     L.positions.at(L.surface.origin_lift(h, {0, 0})).z;
        double w = cotan_weight(L.surface, devL, e);
        if (std::abs(std::abs(dz) - std::sqrt(2.0)) < 1e-9)
            CHECK(std::abs(w) <= 1e-12);  // square diagonals drop out
        else
            CHECK(w > 0.0);
    }
}

TEST_CASE("deformation field matches finite differences") {
    auto F = regular_torus_fixture(2, 2);
    const Surface& S = F.surface;
    DevelopingMap dev = develop(S, *F.cr);
    KernelReal K = kernel_real(assemble_cr_form_real(S, *F.cr));
    REQUIRE(K.dim == 2);

    Eigen::VectorXd q = K.basis.col(0);
    DeformationField def = hqd_to_deformation(S, dev, q);
    CHECK(def.max_conflict <= 1e-8);

    double eps = 1e-6;
    CrossRatioSystem pert = *F.cr;
    for (int e = 0; e < S.num_edges; ++e) pert.cr[e] *= std::exp(eps * q(e));
    DevelopingMap dev2 = develop(S, pert);
    for (auto& [l, z] : dev.pos) {
        auto it = dev2.pos.find(l);
        REQUIRE(it != dev2.pos.end());
        Complex fd = (it->second.z - z.z) / eps;
        CHECK(std::abs(fd - def.zdot.at(l)) <= 1e-4);
    }
}

TEST_CASE("deformations integrate to harmonic functions with the energy identity") {
    // the identity lives at non euclidean points of the family, in the chart
    // where the holonomy acts by scaling
    auto F = regular_torus_fixture(2, 2);
    const Surface& S = F.surface;
    AffineFamilyPoint P = solve_pattern(S, *F.theta, 0.5, -0.3);
    DevelopingMap devn = affine_normalize(P.dev, P.cls);
    KernelReal K = kernel_real(assemble_cr_form_real(S, P.cr));
    REQUIRE(K.dim == 2);

    for (int c = 0; c < K.dim; ++c) {
        DeformationField def = hqd_to_deformation(S, devn, K.basis.col(c));
        HarmonicFunction hf = deformation_to_harmonic(S, devn, def, P.cls);
        CHECK(hf.periods_constant);
        CHECK(hf.period_spread <= 1e-8);
        CHECK(hf.ustar_closure <= 1e-8);

        double E = dirichlet_energy(S, devn, hf);
        double Ec = dirichlet_energy_conjugate(S, devn, hf);
        double pairing = -std::imag(hf.period[0] * std::conj(hf.period[1]));
        double scale = std::max({1.0, std::abs(E)});
        CHECK(std::abs(E - Ec) <= 1e-8 * scale);
        CHECK(std::abs(E - pairing) <= 1e-8 * scale);
    }
}

TEST_CASE("euclidean tori are refused by the energy, their periods drift") {
    auto F = regular_torus_fixture(2, 2);
    const Surface& S = F.surface;
    DevelopingMap dev = develop(S, *F.cr);
    auto cls = classify_holonomy(holonomy(S, dev));
    KernelReal K = kernel_real(assemble_cr_form_real(S, *F.cr));
    DeformationField def = hqd_to_deformation(S, dev, K.basis.col(0));
    HarmonicFunction hf = deformation_to_harmonic(S, dev, def, cls);
    CHECK(!hf.periods_constant);
    CHECK_THROWS_AS(dirichlet_energy(S, dev, hf), validation_error);
}

TEST_CASE("position form kernel agrees with the cr form kernel") {
    auto F = regular_torus_fixture(2, 2);
    const Surface& S = F.surface;
    DevelopOptions opt;
    opt.range = PatchRange{-2, 2, -2, 2};
    DevelopingMap dev = develop(S, *F.cr, opt);

    KernelReal Kcr = kernel_real(assemble_cr_form_real(S, *F.cr));
    KernelReal Kz0 = kernel_real(assemble_z_form(S, dev, {0, 0}));
    KernelReal Kz1 = kernel_real(assemble_z_form(S, dev, {1, 0}));
    CHECK(Kz0.dim == Kcr.dim);
    CHECK(Kz1.dim == Kcr.dim);

    // the kernels span the same subspace: projecting one basis onto the
    // other loses nothing
    for (auto* Kz : {&Kz0, &Kz1})
        for (int c = 0; c < Kz->dim; ++c) {
            Eigen::VectorXd v = Kz->basis.col(c);
            Eigen::VectorXd res = v - Kcr.basis * (Kcr.basis.transpose() * v);
            CHECK(res.lpNorm<Eigen::Infinity>() <= 1e-8);
        }
}

TEST_CASE("jessen differential lies in the position form kernel") {
    auto F = jessen();
    const Surface& S = F.surface;
    DevelopingMap dev;
    dev.pos.insert(F.positions.begin(), F.positions.end());
    Eigen::MatrixXd M = assemble_z_form(S, dev);
    Eigen::VectorXd q(S.num_edges);
    for (int e = 0; e < S.num_edges; ++e) q(e) = F.q[e];

    CHECK((M * q).lpNorm<Eigen::Infinity>() <= 1e-12);

    KernelReal K = kernel_real(M);
    CHECK(K.dim == 1);
    Eigen::VectorXd res = q - K.basis * (K.basis.transpose() * q);
    CHECK(res.lpNorm<Eigen::Infinity>() <= 1e-12);
}
