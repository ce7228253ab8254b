// Acceptance gate: one line per criterion, nonzero exit if any fails.
#include <chrono>
#include <cmath>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "crpat/fixtures.h"
#include "crpat/hqd.h"
#include "crpat/io.h"
#include "crpat/render.h"
#include "crpat/solver.h"

using namespace crpat;

namespace {

int failures = 0;

void report(int idx, const std::string& name, bool ok, const std::string& detail) {
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << "criterion " << idx << ": " << name;
    if (!detail.empty()) std::cout << " [" << detail << "]";
    std::cout << std::endl;
    if (!ok) ++failures;
}

template <class Fn>
void criterion(int idx, const std::string& name, Fn fn) {
    bool ok = false;
    std::string detail;
    try {
        ok = fn(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    report(idx, name, ok, detail);
}

double now_seconds(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double chordal(const ExtComplex& a, const ExtComplex& b) {
    if (a.is_inf() && b.is_inf()) return 0.0;
    if (a.is_inf()) return 2.0 / std::sqrt(1.0 + std::norm(b.z));
    if (b.is_inf()) return 2.0 / std::sqrt(1.0 + std::norm(a.z));
    return 2.0 * std::abs(a.z - b.z) /
           std::sqrt((1.0 + std::norm(a.z)) * (1.0 + std::norm(b.z)));
}

}  // namespace

int main() {
    criterion(1, "kernel dimension two with a clear spectral gap", [](std::string& d) {
        auto t0 = std::chrono::steady_clock::now();
        std::vector<FixtureBundle> fixtures;
        fixtures.push_back(one_vertex_torus_a());
        fixtures.push_back(regular_torus_fixture(2, 2));
        fixtures.push_back(regular_torus_fixture(3, 3));
        fixtures.push_back(regular_torus_fixture(2, 3));
        fixtures.push_back(four_eight_lattice());
        double min_gap = std::numeric_limits<double>::infinity();
        for (auto& F : fixtures) {
            KernelReal K = kernel_real(assemble_cr_form_real(F.surface, *F.cr));
            if (K.dim != 2) {
                d = "dim " + std::to_string(K.dim);
                return false;
            }
            min_gap = std::min(min_gap, K.gap);
        }
        double secs = now_seconds(t0);
        std::ostringstream os;
        os << "5 fixtures, min gap " << min_gap << ", " << secs << "s";
        d = os.str();
        return min_gap >= 1e6 && secs < 10.0;
    });

    criterion(2, "kernel dimensions of the one vertex families", [](std::string& d) {
        auto A = one_vertex_torus_a();
        KernelReal Kar = kernel_real(assemble_cr_form_real(A.surface, *A.cr));
        KernelComplex Kac = kernel_complex(assemble_cr_form_complex(A.surface, *A.cr));

        Complex b(2.0, 0.0);
        auto B = one_vertex_torus_b(b);
        KernelComplex Kbc = kernel_complex(assemble_cr_form_complex(B.surface, *B.cr));
        KernelReal Kbr = kernel_real(assemble_cr_form_real(B.surface, *B.cr));
        bool direction = false;
        if (Kbc.dim == 1 && std::abs(Kbc.basis(1, 0)) > 1e-12) {
            Complex s = Kbc.basis(1, 0);
            direction = std::abs(Kbc.basis(0, 0) / s - (-(1.0 + b))) <= 1e-8 &&
                        std::abs(Kbc.basis(2, 0) / s - b) <= 1e-8;
        }

        auto C = one_vertex_torus_b(Complex(2.0, 1.0));
        KernelReal Kcr = kernel_real(assemble_cr_form_real(C.surface, *C.cr));

        std::ostringstream os;
        os << "a: R" << Kar.dim << " C" << Kac.dim << "; b=2: C" << Kbc.dim << " R"
           << Kbr.dim << "; b=2+i: R" << Kcr.dim;
        d = os.str();
        return Kar.dim == 2 && Kac.dim == 2 && Kbc.dim == 1 && Kbr.dim == 1 &&
               direction && Kcr.dim == 0;
    });

    criterion(3, "jessen differential solves the position form", [](std::string& d) {
        auto F = jessen();
        DevelopingMap dev;
        dev.pos.insert(F.positions.begin(), F.positions.end());
        Eigen::MatrixXd M = assemble_z_form(F.surface, dev);
        Eigen::VectorXd q(F.surface.num_edges);
        for (int e = 0; e < F.surface.num_edges; ++e) q(e) = F.q[e];
        double residual = (M * q).lpNorm<Eigen::Infinity>();
        KernelReal K = kernel_real(M);
        double proj = std::numeric_limits<double>::infinity();
        if (K.dim >= 1)
            proj = (q - K.basis * (K.basis.transpose() * q)).lpNorm<Eigen::Infinity>();
        std::ostringstream os;
        os << "residual " << residual << ", kernel dim " << K.dim << ", projection "
           << proj;
        d = os.str();
        return residual <= 1e-9 && K.dim == 1 && proj <= 1e-7;
    });

    criterion(4, "icosahedral pattern is rigid and reproducible", [](std::string& d) {
        auto F = icosahedron_sphere();
        SphereSolveResult R = solve_sphere_pattern(F.surface, *F.theta);
        KernelReal K = kernel_real(assemble_cr_form_real(F.surface, R.cr));
        double spread = 0.0;
        std::mt19937 gen(20260822);
        for (int t = 0; t < 10; ++t) {
            SolveOptions opt;
            opt.x0.resize(F.surface.num_edges);
            for (int e = 0; e < F.surface.num_edges; ++e)
                opt.x0(e) = 0.3 * (2.0 * (double(gen()) / 4294967296.0) - 1.0);
            SphereSolveResult R2 = solve_sphere_pattern(F.surface, *F.theta, opt);
            spread = std::max(spread, (R2.X - R.X).lpNorm<Eigen::Infinity>());
        }
        std::ostringstream os;
        os << "kernel dim " << K.dim << ", restart spread " << spread;
        d = os.str();
        return K.dim == 0 && spread <= 1e-7;
    });

    criterion(5, "multiplier logs follow the parameters over a grid", [](std::string& d) {
        auto t0 = std::chrono::steady_clock::now();
        auto F = regular_torus_fixture(2, 2);
        double worst = 0.0;
        SolveOptions opt;
        for (int i = 0; i < 5; ++i)
            for (int j = 0; j < 5; ++j) {
                double A1 = -1.0 + 0.5 * i, A2 = -1.0 + 0.5 * j;
                AffineFamilyPoint P = solve_pattern(F.surface, *F.theta, A1, A2, opt);
                opt.x0 = P.X;
                opt.validate_cycles = false;
                if (std::max(std::abs(A1), std::abs(A2)) < 1e-9) continue;
                worst = std::max(worst, std::abs(std::real(P.modulus.h1) - A1));
                worst = std::max(worst, std::abs(std::real(P.modulus.h2) - A2));
            }

        // a closed loop of continuations returns to the same solution
        SolveOptions copt;
        Eigen::VectorXd X0 = solve_pattern(F.surface, *F.theta, 0.0, 0.0).X;
        copt.x0 = X0;
        copt.validate_cycles = false;
        for (auto [a1, a2] : std::vector<std::pair<double, double>>{
                 {1, 0}, {1, 1}, {0, 1}, {0, 0}})
            copt.x0 = solve_pattern(F.surface, *F.theta, a1, a2, copt).X;
        double loop = (copt.x0 - X0).lpNorm<Eigen::Infinity>();
        double secs = now_seconds(t0);
        std::ostringstream os;
        os << "max |Re h - A| " << worst << ", loop gap " << loop << ", " << secs << "s";
        d = os.str();
        return worst <= 1e-8 && loop <= 1e-7 && secs < 60.0;
    });

    criterion(6, "the modulus map is a two to one local diffeomorphism",
              [](std::string& d) {
        auto F = regular_torus_fixture(1, 1);
        ScanResult R = covering_scan(F.surface, *F.theta, 9, 1.0);
        double mirror = 0.0;
        int n = R.n;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                mirror = std::max(mirror,
                                  std::abs(R.tau[i * n + j] -
                                           R.tau[(n - 1 - i) * n + (n - 1 - j)]));
        std::ostringstream os;
        os << "mirror gap " << mirror << ", extra duplicates "
           << R.extra_duplicates.size() << ", min |det| " << R.min_nonzero_det;
        d = os.str();
        return mirror <= 1e-8 && R.extra_duplicates.empty() && R.min_nonzero_det > 1e-6;
    });

    criterion(7, "dirichlet energy equals the period pairing", [](std::string& d) {
        struct Case {
            int m, n;
            double A1, A2;
        };
        double worst = 0.0;
        for (Case c : {Case{2, 2, 0.5, -0.3}, Case{3, 3, 0.5, -0.3}, Case{2, 3, 0.4, 0.2}}) {
            auto F = regular_torus_fixture(c.m, c.n);
            AffineFamilyPoint P = solve_pattern(F.surface, *F.theta, c.A1, c.A2);
            DevelopingMap devn = affine_normalize(P.dev, P.cls);
            KernelReal K = kernel_real(assemble_cr_form_real(F.surface, P.cr));
            if (K.dim != 2) {
                d = "kernel dim " + std::to_string(K.dim);
                return false;
            }
            for (int col = 0; col < 2; ++col) {
                DeformationField def =
                    hqd_to_deformation(F.surface, devn, K.basis.col(col));
                HarmonicFunction hf =
                    deformation_to_harmonic(F.surface, devn, def, P.cls);
                if (!hf.periods_constant) {
                    d = "periods not constant";
                    return false;
                }
                double E = dirichlet_energy(F.surface, devn, hf);
                double Ec = dirichlet_energy_conjugate(F.surface, devn, hf);
                double pairing = -std::imag(hf.period[0] * std::conj(hf.period[1]));
                double scale = std::max(1.0, std::abs(E));
                worst = std::max(worst, std::abs(E - pairing) / scale);
                worst = std::max(worst, std::abs(E - Ec) / scale);
            }
        }
        std::ostringstream os;
        os << "worst relative mismatch " << worst;
        d = os.str();
        return worst <= 1e-6;
    });

    criterion(8, "random stars close and layouts are traversal independent",
              [](std::string& d) {
        std::mt19937 gen(20260822);
        auto uni = [&](double lo, double hi) {
            return lo + (hi - lo) * (double(gen()) / 4294967296.0);
        };
        double worst_phi = 0.0, worst_rebuild = 0.0;
        int done = 0;
        while (done < 100) {
            int n = 3 + int(gen() % 6);
            Complex zc(uni(-1, 1), uni(-1, 1));
            std::vector<double> angles;
            for (int k = 0; k < n; ++k) angles.push_back(uni(0, 2 * kPi));
            std::sort(angles.rbegin(), angles.rend());
            bool usable = angles.front() - angles.back() <= 2 * kPi - 0.05;
            for (int k = 0; k + 1 < n && usable; ++k)
                usable = angles[k] - angles[k + 1] >= 0.05;
            if (!usable) continue;
            ++done;
            std::vector<Complex> w(n);
            for (int k = 0; k < n; ++k)
                w[k] = zc + std::polar(uni(0.5, 2.0), angles[k]);
            std::vector<Complex> star;
            for (int k = 0; k < n; ++k)
                star.push_back(
                    cross_ratio(zc, w[k], w[(k + n - 1) % n], w[(k + 1) % n]));
            Complex run = 1.0, sum = 0.0;
            for (Complex s : star) {
                run *= s;
                sum += run;
            }
            worst_phi = std::max(worst_phi, std::abs(run - 1.0));
            worst_phi = std::max(worst_phi, std::abs(sum) / double(n));

            StarLayout L = close_vertex_star(star);
            worst_phi = std::max(worst_phi, L.closure_gap);
            MoebiusMap M = moebius_through(
                {ExtComplex::infinity(), ExtComplex(0.0, 0.0), ExtComplex(1.0, 0.0)},
                {ExtComplex(zc), ExtComplex(w[n - 1]), ExtComplex(w[0])});
            for (int k = 1; k <= n; ++k)
                worst_rebuild = std::max(
                    worst_rebuild, chordal(M.apply(ExtComplex(L.z[k])),
                                           ExtComplex(w[(k - 1) % n])));
        }

        auto F = regular_torus_fixture(2, 2);
        DevelopOptions bo, od;
        od.order = TraversalOrder::DepthFirst;
        DevelopingMap a = develop(F.surface, *F.cr, bo);
        DevelopingMap b2 = develop(F.surface, *F.cr, od);
        double traversal = 0.0;
        for (auto& [l, z] : a.pos) traversal = std::max(traversal, chordal(z, b2.pos.at(l)));

        std::ostringstream os;
        os << "worst closing " << worst_phi << ", rebuild " << worst_rebuild
           << ", traversal " << traversal;
        d = os.str();
        return worst_phi <= 1e-9 && worst_rebuild <= 1e-7 && traversal <= 1e-12;
    });

    criterion(9, "holonomy types across the family", [](std::string& d) {
        auto A = one_vertex_torus_a();
        DevelopingMap devA = develop(A.surface, *A.cr);
        auto clsA = classify_holonomy(holonomy(A.surface, devA));

        auto B = one_vertex_torus_b(Complex(2.0, 0.0));
        DevelopingMap devB = develop(B.surface, *B.cr);
        HolonomyMaps HB = holonomy(B.surface, devB);
        auto clsB = classify_holonomy(HB);
        bool exchange = false;
        if (clsB.type == HolonomyType::TypeIII) {
            auto fp = fixed_points(HB.rho1.normalized());
            exchange = fp.size() == 2 &&
                       chordal(HB.rho2.apply(fp[0]), fp[1]) <= 1e-7 &&
                       chordal(HB.rho2.apply(fp[1]), fp[0]) <= 1e-7;
        }

        auto F = regular_torus_fixture(2, 2);
        AffineFamilyPoint P = solve_pattern(F.surface, *F.theta, 1.0, 0.0);
        double l1 = std::log(std::abs(P.cls.alpha[0]));
        double l2 = std::log(std::abs(P.cls.alpha[1]));

        std::ostringstream os;
        os << "a: type " << int(clsA.type) << ", b: exchange " << exchange
           << ", commutator " << clsB.commutator_error << ", logs " << l1 << " " << l2;
        d = os.str();
        return clsA.type == HolonomyType::TypeI && exchange &&
               clsB.commutator_error <= 1e-7 &&
               P.cls.type == HolonomyType::TypeII && std::abs(l1 - 1.0) <= 1e-7 &&
               std::abs(l2) <= 1e-7;
    });

    criterion(10, "rendering is deterministic with one circle per face lift",
              [](std::string& d) {
        auto F = regular_torus_fixture(2, 2);
        RenderOptions opt;
        for (int m = 0; m <= 1; ++m)
            for (int n = 0; n <= 1; ++n) opt.words.push_back(DeckWord{m, n});

        auto draw = [&]() {
            DevelopingMap dev = develop(F.surface, *F.cr);
            std::map<Lift, ExtComplex> pos(dev.pos.begin(), dev.pos.end());
            return render_svg(F.surface, pos, opt);
        };
        std::string svg1 = draw(), svg2 = draw();
        int circles = 0;
        for (size_t p = svg1.find("<circle "); p != std::string::npos;
             p = svg1.find("<circle ", p + 1))
            ++circles;
        std::ostringstream os;
        os << "identical " << (svg1 == svg2) << ", circles " << circles;
        d = os.str();
        return svg1 == svg2 && circles == 8 * 4;
    });

    std::cout << (failures == 0 ? "all criteria passed" : "some criteria failed")
              << std::endl;
    return failures == 0 ? 0 : 1;
}
