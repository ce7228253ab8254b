#include "crpat/solver.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>

namespace crpat {

namespace {

CrossRatioSystem cr_from_logs(const AngleStructure& Th, const Eigen::VectorXd& X) {
    CrossRatioSystem cr;
    cr.cr.resize(X.size());
    for (int e = 0; e < X.size(); ++e)
        cr.cr[e] = std::exp(Complex(X(e), Th.theta[e]));
    return cr;
}

// The closing conditions in log form: sum of X around each star, then the
// real and imaginary parts of the telescoping sum.
void closing_rows(const Surface& S, const CrossRatioSystem& cr, const Eigen::VectorXd& X,
                  Eigen::VectorXd& out) {
    int V = S.num_vertices;
    for (int v = 0; v < V; ++v) {
        double sx = 0.0;
        Complex prod = 1.0, sum = 0.0;
        for (int h : S.star[v]) {
            int e = S.edge_of[h];
            sx += X(e);
            prod *= cr.cr[e];
            sum += prod;
        }
        out(v) = sx;
        out(V + 2 * v) = std::real(sum);
        out(V + 2 * v + 1) = std::imag(sum);
    }
}

std::array<MoebiusMap, 2> raw_holonomy(const Surface& S, const DevelopingMap& dev) {
    std::array<MoebiusMap, 2> rho;
    for (int r = 0; r < 2; ++r) {
        auto pairs = matched_lift_pairs(S, dev, r);
        std::array<ExtComplex, 3> src, dst;
        int chosen = 0;
        for (auto& [la, lb] : pairs) {
            ExtComplex za = dev.pos.at(la), zb = dev.pos.at(lb);
            bool ok = !za.is_inf() && !zb.is_inf();
            for (int i = 0; i < chosen && ok; ++i)
                ok = std::abs(src[i].z - za.z) > 1e-9 && std::abs(dst[i].z - zb.z) > 1e-9;
            if (!ok) continue;
            src[chosen] = za;
            dst[chosen] = zb;
            if (++chosen == 3) break;
        }
        if (chosen < 3) throw numeric_error("degenerate layout, holonomy underdetermined");
        rho[r] = moebius_through(src, dst);
    }
    return rho;
}

// Joint multiplier logs of a commuting pair: eigenvector of the better
// conditioned generator, multipliers of both along it, and the sheet closer
// to the requested targets.
std::array<double, 2> multiplier_logs(const std::array<MoebiusMap, 2>& rho, double A1,
                                      double A2) {
    MoebiusMap n1 = rho[0].normalized(), n2 = rho[1].normalized();
    Complex d1 = n1.trace() * n1.trace() - 4.0;
    Complex d2 = n2.trace() * n2.trace() - 4.0;
    const MoebiusMap& a = std::abs(d1) >= std::abs(d2) ? n1 : n2;
    Complex disc = std::abs(d1) >= std::abs(d2) ? d1 : d2;
    Complex lam = (a.trace() + std::sqrt(disc)) / 2.0;

    Complex v0, v1;
    if (std::abs(a.b) + std::abs(lam - a.a) >= std::abs(lam - a.d) + std::abs(a.c)) {
        v0 = a.b;
        v1 = lam - a.a;
    } else {
        v0 = lam - a.d;
        v1 = a.c;
    }
    if (std::abs(v0) + std::abs(v1) < 1e-300)
        throw numeric_error("vanishing eigenvector in multiplier computation");

    std::array<double, 2> logs;
    for (int r = 0; r < 2; ++r) {
        const MoebiusMap& m = r == 0 ? n1 : n2;
        Complex w0 = m.a * v0 + m.b * v1;
        Complex w1 = m.c * v0 + m.d * v1;
        Complex mu = std::abs(v0) >= std::abs(v1) ? w0 / v0 : w1 / v1;
        if (mu == 0.0) throw numeric_error("vanishing multiplier");
        logs[r] = 2.0 * std::log(std::abs(mu));
    }
    double keep = std::abs(logs[0] - A1) + std::abs(logs[1] - A2);
    double flip = std::abs(-logs[0] - A1) + std::abs(-logs[1] - A2);
    if (flip < keep) {
        logs[0] = -logs[0];
        logs[1] = -logs[1];
    }
    return logs;
}

DevelopOptions loose_develop_options(PatchRange range, std::array<ExtComplex, 3> seed) {
    DevelopOptions o;
    o.range = range;
    o.seed = seed;
    o.conflict_tol = 1e30;  // mid-iteration systems do not close yet
    return o;
}

const std::array<ExtComplex, 3> kDefaultSeed{ExtComplex(0.0, 0.0), ExtComplex(1.0, 0.0),
                                             ExtComplex(0.5, 0.8660254037844386)};

Eigen::VectorXd torus_residual(const Surface& S, const AngleStructure& Th, double A1,
                               double A2, const Eigen::VectorXd& X) {
    CrossRatioSystem cr = cr_from_logs(Th, X);
    Eigen::VectorXd out(3 * S.num_vertices + 2);
    closing_rows(S, cr, X, out);
    DevelopingMap dev =
        develop(S, cr, loose_develop_options(PatchRange{0, 1, 0, 1}, kDefaultSeed));
    auto rho = raw_holonomy(S, dev);
    auto logs = multiplier_logs(rho, A1, A2);
    out(3 * S.num_vertices) = logs[0] - A1;
    out(3 * S.num_vertices + 1) = logs[1] - A2;
    return out;
}

// At the Euclidean point the multipliers degenerate; the translation periods
// replace them, with the seed apex and both translations as extra unknowns.
Eigen::VectorXd euclidean_residual(const Surface& S, const AngleStructure& Th,
                                   const Eigen::VectorXd& vars) {
    int E = S.num_edges;
    Eigen::VectorXd X = vars.head(E);
    Complex zeta(vars(E), vars(E + 1));
    std::array<Complex, 2> beta{Complex(vars(E + 2), vars(E + 3)),
                                Complex(vars(E + 4), vars(E + 5))};
    CrossRatioSystem cr = cr_from_logs(Th, X);
    std::array<ExtComplex, 3> seed{ExtComplex(0.0, 0.0), ExtComplex(1.0, 0.0),
                                   ExtComplex(zeta)};
    DevelopingMap dev = develop(S, cr, loose_develop_options(PatchRange{0, 1, 0, 1}, seed));

    std::vector<double> rows;
    for (int r = 0; r < 2; ++r)
        for (auto& [la, lb] : matched_lift_pairs(S, dev, r)) {
            ExtComplex za = dev.pos.at(la), zb = dev.pos.at(lb);
            if (za.is_inf() || zb.is_inf())
                throw numeric_error("infinite position in Euclidean residual");
            Complex d = zb.z - za.z - beta[r];
            rows.push_back(std::real(d));
            rows.push_back(std::imag(d));
        }

    Eigen::VectorXd out(3 * S.num_vertices + rows.size());
    closing_rows(S, cr, X, out);
    for (size_t i = 0; i < rows.size(); ++i) out(3 * S.num_vertices + i) = rows[i];
    return out;
}

using ResidualFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

Eigen::VectorXd gauss_newton(const ResidualFn& fn, Eigen::VectorXd x,
                             const SolveOptions& opt, int& iters, double& final_res) {
    Eigen::VectorXd r = fn(x);
    for (iters = 0; iters < opt.max_iter; ++iters) {
        final_res = r.lpNorm<Eigen::Infinity>();
        if (final_res <= opt.tol) return x;

        Eigen::MatrixXd J(r.size(), x.size());
        for (int k = 0; k < x.size(); ++k) {
            Eigen::VectorXd xp = x;
            xp(k) += opt.fd_eps;
            J.col(k) = (fn(xp) - r) / opt.fd_eps;
        }
        Eigen::BDCSVD<Eigen::MatrixXd> svd(J, Eigen::ComputeThinU | Eigen::ComputeThinV);
        Eigen::VectorXd step = svd.solve(-r);

        double rn = r.norm();
        double s = 1.0;
        bool accepted = false;
        for (int bt = 0; bt < opt.max_backtrack; ++bt, s *= 0.5) {
            Eigen::VectorXd xn = x + s * step;
            Eigen::VectorXd rn2;
            try {
                rn2 = fn(xn);
            } catch (const std::runtime_error&) {
                continue;
            }
            if (rn2.norm() < rn) {
                x = xn;
                r = rn2;
                accepted = true;
                break;
            }
        }
        if (!accepted) throw numeric_error("solver stalled, no descent direction");
    }
    final_res = r.lpNorm<Eigen::Infinity>();
    if (final_res > opt.tol)
        throw numeric_error("solver did not converge, residual " + std::to_string(final_res));
    return x;
}

// Exchanges the roles of the two fixed points of a type II classification.
HolonomyClassification flipped_normalization(const HolonomyClassification& cls) {
    HolonomyClassification out = cls;
    std::swap(out.fixed[0], out.fixed[1]);
    out.normalizer = MoebiusMap{0.0, 1.0, 1.0, 0.0}.compose(cls.normalizer).normalized();
    out.alpha = {1.0 / cls.alpha[0], 1.0 / cls.alpha[1]};
    return out;
}

}  // namespace

AffineFamilyPoint solve_pattern(const Surface& S, const AngleStructure& Th, double A1,
                                double A2, const SolveOptions& opt) {
    if (S.genus != 1) throw validation_error("solve_pattern expects a torus");
    auto rep = validate_angle_structure(S, Th, 12, opt.validate_cycles);
    if (!rep.valid) throw validation_error("angle structure invalid: " + rep.reason);

    int E = S.num_edges;
    bool euclidean = std::max(std::abs(A1), std::abs(A2)) < 1e-9;
    Eigen::VectorXd x0 = Eigen::VectorXd::Zero(E);
    if (opt.x0.size() == E) x0 = opt.x0;
    else if (opt.x0.size() != 0)
        throw validation_error("warm start length does not match edge count");

    AffineFamilyPoint P;
    P.A1 = A1;
    P.A2 = A2;
    std::array<ExtComplex, 3> final_seed = kDefaultSeed;

    if (euclidean) {
        Eigen::VectorXd vars = Eigen::VectorXd::Zero(E + 6);
        vars.head(E) = x0;
        Complex zeta0(0.5, 0.8660254037844386);
        vars(E) = std::real(zeta0);
        vars(E + 1) = std::imag(zeta0);
        std::array<Complex, 2> beta0{Complex(1.0, 0.0), zeta0};
        try {
            CrossRatioSystem cr0 = cr_from_logs(Th, x0);
            std::array<ExtComplex, 3> seed{ExtComplex(0.0, 0.0), ExtComplex(1.0, 0.0),
                                           ExtComplex(zeta0)};
            DevelopingMap dev0 =
                develop(S, cr0, loose_develop_options(PatchRange{0, 1, 0, 1}, seed));
            for (int r = 0; r < 2; ++r) {
                auto pairs = matched_lift_pairs(S, dev0, r);
                if (!pairs.empty()) {
                    ExtComplex a = dev0.pos.at(pairs.front().first);
                    ExtComplex b = dev0.pos.at(pairs.front().second);
                    if (!a.is_inf() && !b.is_inf()) beta0[r] = b.z - a.z;
                }
            }
        } catch (const std::runtime_error&) {
        }
        vars(E + 2) = std::real(beta0[0]);
        vars(E + 3) = std::imag(beta0[0]);
        vars(E + 4) = std::real(beta0[1]);
        vars(E + 5) = std::imag(beta0[1]);

        auto fn = [&](const Eigen::VectorXd& v) { return euclidean_residual(S, Th, v); };
        Eigen::VectorXd sol = gauss_newton(fn, vars, opt, P.iterations, P.residual);
        P.X = sol.head(E);
        final_seed[2] = ExtComplex(Complex(sol(E), sol(E + 1)));
    } else {
        auto fn = [&](const Eigen::VectorXd& v) {
            return torus_residual(S, Th, A1, A2, v);
        };
        P.X = gauss_newton(fn, x0, opt, P.iterations, P.residual);
    }

    P.cr = cr_from_logs(Th, P.X);
    DevelopOptions dopt;
    dopt.range = PatchRange{-1, 2, -1, 2};
    dopt.seed = final_seed;
    P.dev = develop(S, P.cr, dopt);
    P.hol = holonomy(S, P.dev);
    P.cls = classify_holonomy(P.hol);
    P.modulus = conformal_modulus(S, P.dev, P.hol, P.cls);
    if (P.cls.type == HolonomyType::TypeII) {
        double keep = std::abs(std::real(P.modulus.h1) - A1) +
                      std::abs(std::real(P.modulus.h2) - A2);
        double flip = std::abs(std::real(P.modulus.h1) + A1) +
                      std::abs(std::real(P.modulus.h2) + A2);
        if (flip < keep) {
            P.cls = flipped_normalization(P.cls);
            P.modulus = conformal_modulus(S, P.dev, P.hol, P.cls);
        }
    }

    auto del = is_delaunay(S, P.cr);
    if (!del.delaunay)
        throw numeric_error("solved system is not Delaunay: " + del.reason);
    for (int v = 0; v < S.num_vertices; ++v)
        if (ramification_order(S, P.cr, v, 1e-8) != 1)
            throw numeric_error("solved system is branched at vertex " + std::to_string(v));
    return P;
}

SphereSolveResult solve_sphere_pattern(const Surface& S, const AngleStructure& Th,
                                       const SolveOptions& opt) {
    if (S.genus != 0) throw validation_error("solve_sphere_pattern expects a sphere");
    auto rep = validate_angle_structure(S, Th, 12, opt.validate_cycles);
    if (!rep.valid) throw validation_error("angle structure invalid: " + rep.reason);

    int E = S.num_edges;
    Eigen::VectorXd x0 = Eigen::VectorXd::Zero(E);
    if (opt.x0.size() == E) x0 = opt.x0;
    else if (opt.x0.size() != 0)
        throw validation_error("warm start length does not match edge count");

    auto fn = [&](const Eigen::VectorXd& v) {
        CrossRatioSystem cr = cr_from_logs(Th, v);
        Eigen::VectorXd out(3 * S.num_vertices);
        closing_rows(S, cr, v, out);
        return out;
    };
    SphereSolveResult R;
    R.X = gauss_newton(fn, x0, opt, R.iterations, R.residual);
    R.cr = cr_from_logs(Th, R.X);
    return R;
}

ScanResult covering_scan(const Surface& S, const AngleStructure& Th, int n, double range,
                         const SolveOptions& opt) {
    if (n < 2) throw validation_error("scan grid needs at least two points per side");
    auto rep = validate_angle_structure(S, Th);
    if (!rep.valid) throw validation_error("angle structure invalid: " + rep.reason);

    ScanResult R;
    R.n = n;
    R.range = range;
    double delta = 2.0 * range / (n - 1);
    auto aval = [&](int i) { return -range + delta * i; };
    R.A1.resize(n * n);
    R.A2.resize(n * n);
    R.tau.resize(n * n);
    R.X.resize(n * n);
    R.jac_det.assign(n * n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            R.A1[i * n + j] = aval(i);
            R.A2[i * n + j] = aval(j);
        }

    int center = 0;
    for (int i = 1; i < n; ++i)
        if (std::abs(aval(i)) < std::abs(aval(center))) center = i;

    std::vector<std::pair<int, int>> order;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) order.push_back({i, j});
    std::sort(order.begin(), order.end(), [&](auto a, auto b) {
        int ra = std::max(std::abs(a.first - center), std::abs(a.second - center));
        int rb = std::max(std::abs(b.first - center), std::abs(b.second - center));
        if (ra != rb) return ra < rb;
        return a < b;
    });

    std::vector<char> solved(n * n, 0);
    SolveOptions popt = opt;
    popt.validate_cycles = false;
    for (auto [i, j] : order) {
        int idx = i * n + j;
        double best = std::numeric_limits<double>::max();
        popt.x0.resize(0);
        for (int k = 0; k < n * n; ++k) {
            if (!solved[k]) continue;
            double d = std::hypot(R.A1[k] - R.A1[idx], R.A2[k] - R.A2[idx]);
            if (d < best) {
                best = d;
                popt.x0 = R.X[k];
            }
        }
        AffineFamilyPoint P = solve_pattern(S, Th, R.A1[idx], R.A2[idx], popt);
        R.X[idx] = P.X;
        R.tau[idx] = P.modulus.tau;
        solved[idx] = 1;
    }

    // finite difference Jacobian of tau over the grid
    auto tat = [&](int i, int j) { return R.tau[i * n + j]; };
    R.min_nonzero_det = std::numeric_limits<double>::max();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Complex d1 = i == 0       ? (tat(i + 1, j) - tat(i, j)) / delta
                         : i == n - 1 ? (tat(i, j) - tat(i - 1, j)) / delta
                                      : (tat(i + 1, j) - tat(i - 1, j)) / (2.0 * delta);
            Complex d2 = j == 0       ? (tat(i, j + 1) - tat(i, j)) / delta
                         : j == n - 1 ? (tat(i, j) - tat(i, j - 1)) / delta
                                      : (tat(i, j + 1) - tat(i, j - 1)) / (2.0 * delta);
            double det = std::real(d1) * std::imag(d2) - std::real(d2) * std::imag(d1);
            int idx = i * n + j;
            R.jac_det[idx] = det;
            if (std::abs(R.A1[idx]) + std::abs(R.A2[idx]) > 1e-12)
                R.min_nonzero_det = std::min(R.min_nonzero_det, std::abs(det));
        }

    for (int p = 0; p < n * n; ++p)
        for (int q = p + 1; q < n * n; ++q) {
            if (std::abs(R.tau[p] - R.tau[q]) > 1e-6) continue;
            bool mirror = std::abs(R.A1[p] + R.A1[q]) + std::abs(R.A2[p] + R.A2[q]) < 1e-9;
            if (!mirror) R.extra_duplicates.push_back({p, q});
        }
    return R;
}

RigidityReport rigidity_check(const Surface& S, const AngleStructure& Th, double A1,
                              double A2, int trials, unsigned seed,
                              const SolveOptions& opt) {
    if (trials < 1) throw validation_error("rigidity check needs at least one trial");
    RigidityReport R;
    R.trials = trials;

    // raw engine output mapped into [-0.3, 0.3]; std::uniform_real_distribution
    // is implementation defined and would break reproducibility
    std::mt19937 gen(seed);
    auto next_uniform = [&]() {
        double u = double(gen()) / 4294967296.0;
        return 0.3 * (2.0 * u - 1.0);
    };

    std::vector<CrossRatioSystem> crs;
    std::vector<std::vector<double>> radii;
    for (int t = 0; t < trials; ++t) {
        SolveOptions popt = opt;
        popt.validate_cycles = t == 0 && opt.validate_cycles;
        popt.x0.resize(S.num_edges);
        for (int e = 0; e < S.num_edges; ++e) popt.x0(e) = next_uniform();
        AffineFamilyPoint P = solve_pattern(S, Th, A1, A2, popt);
        R.residuals.push_back(P.residual);
        crs.push_back(P.cr);
        std::vector<double> rf;
        for (int f = 0; f < S.num_faces(); ++f) {
            std::array<ExtComplex, 3> z;
            for (int c = 0; c < 3; ++c)
                z[c] = P.dev.pos.at(Lift{S.faces[f][c], S.corner_off[f][c]});
            Circumcircle cc = circumcircle(z[0], z[1], z[2]);
            rf.push_back(cc.is_line ? 0.0 : cc.radius);
        }
        radii.push_back(rf);
    }

    for (int t = 1; t < trials; ++t) {
        for (int e = 0; e < S.num_edges; ++e)
            R.max_cr_deviation =
                std::max(R.max_cr_deviation, std::abs(crs[t].cr[e] - crs[0].cr[e]));
        double mean = 0.0;
        std::vector<double> ratio;
        for (int f = 0; f < S.num_faces(); ++f) {
            if (radii[0][f] == 0.0) continue;
            ratio.push_back(radii[t][f] / radii[0][f]);
            mean += ratio.back();
        }
        if (!ratio.empty()) {
            mean /= double(ratio.size());
            for (double s : ratio)
                R.max_radius_ratio_deviation = std::max(
                    R.max_radius_ratio_deviation, std::abs(s - mean) / std::abs(mean));
        }
    }
    R.consistent = R.max_cr_deviation <= 1e-7 && R.max_radius_ratio_deviation <= 1e-7;
    return R;
}

}  // namespace crpat
