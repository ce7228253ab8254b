#include "crpat/hqd.h"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <unordered_set>

namespace crpat {

namespace {

// Cumulative tail sums of the star products: tails[t] = sum_{k >= t} P_k.
std::vector<Complex> star_tails(const Surface& S, const CrossRatioSystem& X, int v) {
    const auto& star = S.star[v];
    size_t n = star.size();
    std::vector<Complex> P(n);
    Complex p = 1.0;
    for (size_t t = 0; t < n; ++t) {
        p *= X.cr[S.edge_of[star[t]]];
        P[t] = p;
    }
    std::vector<Complex> tails(n);
    Complex s = 0.0;
    for (size_t t = n; t-- > 0;) {
        s += P[t];
        tails[t] = s;
    }
    return tails;
}

void require_valid(const Surface& S, const CrossRatioSystem& X) {
    if (!is_valid(S, X, 1e-6))
        throw validation_error("cross ratio system does not satisfy the closing conditions");
}

}  // namespace

Eigen::MatrixXd assemble_cr_form_real(const Surface& S, const CrossRatioSystem& X) {
    require_valid(S, X);
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(3 * S.num_vertices, S.num_edges);
    for (int v = 0; v < S.num_vertices; ++v) {
        auto tails = star_tails(S, X, v);
        for (size_t t = 0; t < S.star[v].size(); ++t) {
            int e = S.edge_of[S.star[v][t]];
            M(3 * v + 0, e) += 1.0;
            M(3 * v + 1, e) += std::real(tails[t]);
            M(3 * v + 2, e) += std::imag(tails[t]);
        }
    }
    return M;
}

Eigen::MatrixXcd assemble_cr_form_complex(const Surface& S, const CrossRatioSystem& X) {
    require_valid(S, X);
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(2 * S.num_vertices, S.num_edges);
    for (int v = 0; v < S.num_vertices; ++v) {
        auto tails = star_tails(S, X, v);
        for (size_t t = 0; t < S.star[v].size(); ++t) {
            int e = S.edge_of[S.star[v][t]];
            M(2 * v + 0, e) += 1.0;
            M(2 * v + 1, e) += tails[t];
        }
    }
    return M;
}

Eigen::MatrixXd assemble_z_form(const Surface& S, const DevelopingMap& dev,
                                DeckWord base) {
    auto pos = position_function(dev);
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(3 * S.num_vertices, S.num_edges);
    for (int v = 0; v < S.num_vertices; ++v) {
        Complex zv = pos(Lift{v, base}).value();
        for (int h : S.star[v]) {
            int e = S.edge_of[h];
            Complex zn = pos(Lift{S.dest(h), word_add(base, S.deck[h])}).value();
            if (zn == zv)
                throw numeric_error("coincident neighbor positions at vertex " +
                                    std::to_string(v));
            Complex coef = 1.0 / (zn - zv);
            M(3 * v + 0, e) += 1.0;
            M(3 * v + 1, e) += std::real(coef);
            M(3 * v + 2, e) += std::imag(coef);
        }
    }
    return M;
}

namespace {

template <typename Mat, typename Out>
void kernel_common(const Mat& M, double rel, Out& out) {
    Eigen::JacobiSVD<Mat> svd(M, Eigen::ComputeFullV);
    auto sv = svd.singularValues();
    out.svals.assign(sv.data(), sv.data() + sv.size());
    double cut = out.svals.empty() ? 0.0 : rel * out.svals.front();
    int rank = 0;
    for (double s : out.svals)
        if (s > cut) ++rank;
    out.dim = int(M.cols()) - rank;
    out.basis = svd.matrixV().rightCols(out.dim);
    if (rank > 0 && rank < int(out.svals.size()))
        out.gap = out.svals[rank - 1] / out.svals[rank];
    else
        out.gap = std::numeric_limits<double>::infinity();
}

}  // namespace

KernelReal kernel_real(const Eigen::MatrixXd& M, double rel_threshold) {
    KernelReal K;
    kernel_common(M, rel_threshold, K);
    return K;
}

KernelComplex kernel_complex(const Eigen::MatrixXcd& M, double rel_threshold) {
    KernelComplex K;
    kernel_common(M, rel_threshold, K);
    return K;
}

std::array<double, 3> face_angles(const std::array<Complex, 3>& z) {
    std::array<double, 3> a;
    for (int t = 0; t < 3; ++t) {
        Complex u = z[(t + 2) % 3] - z[t];
        Complex v = z[(t + 1) % 3] - z[t];
        if (u == 0.0 || v == 0.0) throw numeric_error("degenerate face corner");
        a[t] = std::arg(u / v);
    }
    return a;
}

namespace {

std::array<Complex, 3> face_positions(const Surface& S, const DevelopingMap& dev, int f,
                                      DeckWord w) {
    std::array<Complex, 3> z;
    for (int t = 0; t < 3; ++t)
        z[t] = dev.pos.at(Lift{S.faces[f][t], word_add(w, S.corner_off[f][t])}).value();
    return z;
}

double cotan_weight_at(const Surface& S, const DevelopingMap& dev, int h, DeckWord fw) {
    int f = S.face_of(h), t = S.corner_of(h);
    int h2 = S.twin[h];
    int g = S.face_of(h2), t2 = S.corner_of(h2);
    DeckWord gw = S.neighbor_word(h, fw);
    double af = face_angles(face_positions(S, dev, f, fw))[(t + 2) % 3];
    double ag = face_angles(face_positions(S, dev, g, gw))[(t2 + 2) % 3];
    auto cot = [](double x) {
        double s = std::sin(x);
        if (s == 0.0) throw numeric_error("degenerate angle in cotangent weight");
        return std::cos(x) / s;
    };
    return cot(af) + cot(ag);
}

// Face lifts whose corners are all laid out, in breadth first order from the
// seed face.
std::vector<std::pair<int, DeckWord>> usable_face_lifts(const Surface& S,
                                                        const DevelopingMap& dev) {
    auto usable = [&](int f, DeckWord w) {
        for (int t = 0; t < 3; ++t) {
            auto it = dev.pos.find(Lift{S.faces[f][t], word_add(w, S.corner_off[f][t])});
            if (it == dev.pos.end() || it->second.is_inf()) return false;
        }
        return true;
    };
    std::vector<std::pair<int, DeckWord>> order;
    if (!usable(dev.seed_face, {0, 0}))
        throw validation_error("seed face has no finite layout");
    std::unordered_set<Lift, LiftHash> seen{Lift{dev.seed_face, {0, 0}}};
    std::deque<std::pair<int, DeckWord>> q{{dev.seed_face, {0, 0}}};
    while (!q.empty()) {
        auto [f, w] = q.front();
        q.pop_front();
        order.push_back({f, w});
        for (int t = 0; t < 3; ++t) {
            int h = 3 * f + t;
            int g = S.face_of(S.twin[h]);
            DeckWord gw = S.genus == 1 ? S.neighbor_word(h, w) : DeckWord{0, 0};
            if (!usable(g, gw)) continue;
            if (seen.insert(Lift{g, gw}).second) q.push_back({g, gw});
        }
    }
    return order;
}

}  // namespace

double cotan_weight(const Surface& S, const DevelopingMap& dev, int e) {
    return cotan_weight_at(S, dev, S.edge_rep[e], DeckWord{0, 0});
}

DeformationField hqd_to_deformation(const Surface& S, const DevelopingMap& dev,
                                    const Eigen::VectorXd& q, double tol) {
    if (q.size() != S.num_edges)
        throw validation_error("kernel vector length does not match edge count");
    auto pos = [&](Lift l) { return dev.pos.at(l).value(); };

    DeformationField out;
    auto assign = [&](Lift l, Complex zd) {
        auto it = out.zdot.find(l);
        if (it == out.zdot.end()) {
            out.zdot.emplace(l, zd);
            return;
        }
        double d = std::abs(it->second - zd) / (1.0 + std::abs(it->second) + std::abs(zd));
        out.max_conflict = std::max(out.max_conflict, d);
        if (d > tol)
            throw numeric_error("deformation conflict of size " + std::to_string(d) +
                                " at vertex " + std::to_string(l.v) +
                                ", the vector is not in the kernel");
    };

    auto lifts = usable_face_lifts(S, dev);
    std::unordered_set<Lift, LiftHash> visited;
    for (int t = 0; t < 3; ++t)
        assign(Lift{S.faces[dev.seed_face][t], S.corner_off[dev.seed_face][t]}, 0.0);
    visited.insert(Lift{dev.seed_face, {0, 0}});

    std::unordered_set<Lift, LiftHash> usable(lifts.size());
    for (auto& [f, w] : lifts) usable.insert(Lift{f, w});

    std::deque<std::pair<int, DeckWord>> todo{{dev.seed_face, {0, 0}}};
    while (!todo.empty()) {
        auto [f, w] = todo.front();
        todo.pop_front();
        for (int t = 0; t < 3; ++t) {
            int h = 3 * f + t;
            int h2 = S.twin[h];
            int g = S.face_of(h2), t2 = S.corner_of(h2);
            DeckWord gw = S.genus == 1 ? S.neighbor_word(h, w) : DeckWord{0, 0};
            if (!usable.count(Lift{g, gw})) continue;
            if (!visited.insert(Lift{g, gw}).second) continue;

            Lift li = S.origin_lift(h, w), lj = S.dest_lift(h, w);
            int tk = (t + 2) % 3;
            Lift lk{S.faces[f][tk], word_add(w, S.corner_off[f][tk])};
            int tl = (t2 + 2) % 3;
            Lift ll{S.faces[g][tl], word_add(gw, S.corner_off[g][tl])};

            Complex zi = pos(li), zj = pos(lj), zk = pos(lk), zl = pos(ll);
            Complex di = out.zdot.at(li), dj = out.zdot.at(lj), dk = out.zdot.at(lk);
            Complex A = 1.0 / (zl - zj), B = 1.0 / (zi - zl);
            Complex denom = A + B;
            if (denom == 0.0) throw numeric_error("degenerate quadrilateral in deformation");
            Complex rhs = q[S.edge_of[h]] - (dk - di) / (zk - zi) + (dj - dk) / (zj - zk) +
                          dj * A + di * B;
            assign(ll, rhs / denom);
            todo.push_back({g, gw});
        }
    }
    return out;
}

HarmonicFunction deformation_to_harmonic(const Surface& S, const DevelopingMap& dev,
                                         const DeformationField& def,
                                         const HolonomyClassification& cls,
                                         double period_tol) {
    HarmonicFunction hf;
    auto zpos = [&](Lift l) { return dev.pos.at(l).value(); };

    auto face_ok = [&](int f, DeckWord w) {
        for (int t = 0; t < 3; ++t)
            if (!def.zdot.count(Lift{S.faces[f][t], word_add(w, S.corner_off[f][t])}))
                return false;
        return true;
    };
    std::vector<std::pair<int, DeckWord>> flist;
    for (auto& [f, w] : usable_face_lifts(S, dev))
        if (face_ok(f, w)) flist.push_back({f, w});

    for (auto& [f, w] : flist) {
        std::array<Lift, 3> c;
        std::array<Complex, 3> z, zd;
        for (int t = 0; t < 3; ++t) {
            c[t] = Lift{S.faces[f][t], word_add(w, S.corner_off[f][t])};
            z[t] = zpos(c[t]);
            zd[t] = def.zdot.at(c[t]);
        }
        for (int t = 0; t < 3; ++t) {
            int j = (t + 1) % 3, k = (t + 2) % 3;
            double u = std::imag((zd[j] - zd[t]) / (z[j] - z[t]) +
                                 (zd[t] - zd[k]) / (z[t] - z[k]) -
                                 (zd[j] - zd[k]) / (z[j] - z[k]));
            auto it = hf.u.find(c[t]);
            if (it == hf.u.end()) hf.u.emplace(c[t], u);
            else hf.face_spread = std::max(hf.face_spread, std::abs(it->second - u));
        }
    }

    // On a torus with scaling holonomy the raw function gains a linear part
    // from the frozen seed; fit it over the first generator and remove it.
    if (S.genus == 1 && cls.type == HolonomyType::TypeII &&
        std::abs(cls.alpha[0] - 1.0) > 1e-8) {
        std::vector<std::pair<Lift, double>> raw;
        for (auto& [l, ul] : hf.u) {
            Lift m{l.v, word_add(l.w, DeckWord{1, 0})};
            auto it = hf.u.find(m);
            if (it != hf.u.end()) raw.push_back({l, it->second - ul});
        }
        if (raw.size() >= 3) {
            Eigen::MatrixXd Bm(raw.size(), 3);
            Eigen::VectorXd rhs(raw.size());
            for (size_t i = 0; i < raw.size(); ++i) {
                Complex z = zpos(raw[i].first);
                Bm(i, 0) = std::real(z);
                Bm(i, 1) = std::imag(z);
                Bm(i, 2) = 1.0;
                rhs(i) = raw[i].second;
            }
            Eigen::Vector3d fit = Bm.colPivHouseholderQr().solve(rhs);
            Complex a_fit(fit(0), fit(1));
            Complex a_corr = a_fit / std::conj(cls.alpha[0] - 1.0);
            for (auto& [l, ul] : hf.u) ul -= std::real(a_corr * std::conj(zpos(l)));
        }
    }

    // conjugate function on faces, integrated over a spanning tree
    std::unordered_set<Lift, LiftHash> have;
    for (auto& [f, w] : flist) have.insert(Lift{f, w});
    if (!flist.empty()) {
        hf.ustar[Lift{flist.front().first, flist.front().second}] = 0.0;
        std::deque<std::pair<int, DeckWord>> q{flist.front()};
        while (!q.empty()) {
            auto [f, w] = q.front();
            q.pop_front();
            double uf = hf.ustar.at(Lift{f, w});
            for (int t = 0; t < 3; ++t) {
                int h = 3 * f + t;
                int g = S.face_of(S.twin[h]);
                DeckWord gw = S.genus == 1 ? S.neighbor_word(h, w) : DeckWord{0, 0};
                if (!have.count(Lift{g, gw})) continue;
                double du = hf.u.at(S.dest_lift(h, w)) - hf.u.at(S.origin_lift(h, w));
                double ug = uf - 0.5 * cotan_weight_at(S, dev, h, w) * du;
                auto it = hf.ustar.find(Lift{g, gw});
                if (it == hf.ustar.end()) {
                    hf.ustar.emplace(Lift{g, gw}, ug);
                    q.push_back({g, gw});
                } else {
                    hf.ustar_closure = std::max(hf.ustar_closure, std::abs(it->second - ug));
                }
            }
        }
    }

    if (S.genus == 1) {
        for (int r = 0; r < 2; ++r) {
            DeckWord step = r == 0 ? DeckWord{1, 0} : DeckWord{0, 1};
            double usum = 0.0, umin = 0.0, umax = 0.0;
            int ucount = 0;
            for (auto& [l, ul] : hf.u) {
                auto it = hf.u.find(Lift{l.v, word_add(l.w, step)});
                if (it == hf.u.end()) continue;
                double p = it->second - ul;
                if (ucount == 0) umin = umax = p;
                umin = std::min(umin, p);
                umax = std::max(umax, p);
                usum += p;
                ++ucount;
            }
            double ssum = 0.0, smin = 0.0, smax = 0.0;
            int scount = 0;
            for (auto& [l, sl] : hf.ustar) {
                auto it = hf.ustar.find(Lift{l.v, word_add(l.w, step)});
                if (it == hf.ustar.end()) continue;
                double p = it->second - sl;
                if (scount == 0) smin = smax = p;
                smin = std::min(smin, p);
                smax = std::max(smax, p);
                ssum += p;
                ++scount;
            }
            if (ucount == 0 || scount == 0)
                throw validation_error("patch too small to read off periods");
            hf.period[r] = Complex(usum / ucount, ssum / scount);
            double spread = std::max(umax - umin, smax - smin);
            hf.period_spread = std::max(hf.period_spread, spread);
            if (spread > period_tol * (1.0 + std::abs(hf.period[r])))
                hf.periods_constant = false;
        }
    }
    return hf;
}

double dirichlet_energy(const Surface& S, const DevelopingMap& dev,
                        const HarmonicFunction& hf) {
    if (!hf.periods_constant)
        throw validation_error("Dirichlet energy needs constant periods");
    double E = 0.0;
    for (int e = 0; e < S.num_edges; ++e) {
        int h = S.edge_rep[e];
        double du = hf.u.at(S.dest_lift(h, DeckWord{0, 0})) -
                    hf.u.at(S.origin_lift(h, DeckWord{0, 0}));
        E += 0.5 * cotan_weight(S, dev, e) * du * du;
    }
    return E;
}

double dirichlet_energy_conjugate(const Surface& S, const DevelopingMap&,
                                  const HarmonicFunction& hf) {
    double E = 0.0;
    for (int e = 0; e < S.num_edges; ++e) {
        int h = S.edge_rep[e];
        double du = hf.u.at(S.dest_lift(h, DeckWord{0, 0})) -
                    hf.u.at(S.origin_lift(h, DeckWord{0, 0}));
        double left = hf.ustar.at(Lift{S.face_of(h), {0, 0}});
        double right = hf.ustar.at(Lift{S.face_of(S.twin[h]),
                                        S.neighbor_word(h, DeckWord{0, 0})});
        // the conjugate jump is half the weighted difference, so this sum
        // reproduces (1/2) sum c du^2 without the extra half
        E += (left - right) * du;
    }
    return E;
}

}  // namespace crpat
