#include "crpat/develop.h"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>
#include <unordered_set>

namespace crpat {

namespace {

double chordal(const ExtComplex& a, const ExtComplex& b) {
    if (a.is_inf() && b.is_inf()) return 0.0;
    if (a.is_inf()) return 2.0 / std::sqrt(1.0 + std::norm(b.z));
    if (b.is_inf()) return 2.0 / std::sqrt(1.0 + std::norm(a.z));
    return 2.0 * std::abs(a.z - b.z) /
           std::sqrt((1.0 + std::norm(a.z)) * (1.0 + std::norm(b.z)));
}

}  // namespace

DevelopingMap develop(const Surface& S, const CrossRatioSystem& X,
                      const DevelopOptions& opt) {
    if (int(X.cr.size()) != S.num_edges)
        throw validation_error("cross ratio count does not match edge count");
    if (opt.seed_face < 0 || opt.seed_face >= S.num_faces())
        throw validation_error("seed face out of range");
    bool torus = S.genus == 1;
    if (torus && !opt.range.contains(DeckWord{0, 0}))
        throw validation_error("patch range must contain the word (0, 0)");

    DevelopingMap dev;
    dev.range = opt.range;
    dev.seed_face = opt.seed_face;

    auto assign = [&](Lift l, const ExtComplex& z) {
        auto it = dev.pos.find(l);
        if (it == dev.pos.end()) {
            dev.pos.emplace(l, z);
            return;
        }
        double d = chordal(it->second, z);
        dev.max_conflict = std::max(dev.max_conflict, d);
        if (d > opt.conflict_tol)
            throw numeric_error("developing map conflict of size " + std::to_string(d) +
                                " at vertex " + std::to_string(l.v) + " word (" +
                                std::to_string(l.w[0]) + "," + std::to_string(l.w[1]) +
                                "), the system does not close up");
    };

    std::unordered_set<Lift, LiftHash> visited;  // face lifts, v field holds the face
    std::deque<std::pair<int, DeckWord>> todo;
    for (int t = 0; t < 3; ++t)
        assign(Lift{S.faces[opt.seed_face][t], S.corner_off[opt.seed_face][t]}, opt.seed[t]);
    visited.insert(Lift{opt.seed_face, {0, 0}});
    todo.push_back({opt.seed_face, {0, 0}});

    while (!todo.empty()) {
        auto [f, w] = opt.order == TraversalOrder::BreadthFirst ? todo.front() : todo.back();
        if (opt.order == TraversalOrder::BreadthFirst) todo.pop_front();
        else todo.pop_back();

        for (int t = 0; t < 3; ++t) {
            int h = 3 * f + t;
            int h2 = S.twin[h];
            int g = S.face_of(h2), t2 = S.corner_of(h2);
            DeckWord gw = torus ? S.neighbor_word(h, w) : DeckWord{0, 0};
            if (torus && !dev.range.contains(gw)) continue;
            if (!visited.insert(Lift{g, gw}).second) continue;

            ExtComplex zi = dev.pos.at(S.origin_lift(h, w));
            ExtComplex zj = dev.pos.at(S.dest_lift(h, w));
            int tk = (t + 2) % 3;
            ExtComplex zk = dev.pos.at(Lift{S.faces[f][tk], word_add(w, S.corner_off[f][tk])});
            ExtComplex zl = solve_fourth_point(X.cr[S.edge_of[h]], zi, zj, zk);
            int tl = (t2 + 2) % 3;
            assign(Lift{S.faces[g][tl], word_add(gw, S.corner_off[g][tl])}, zl);
            todo.push_back({g, gw});
        }
    }

    size_t expected = torus ? size_t(S.num_faces()) * (dev.range.m1 - dev.range.m0 + 1) *
                                  (dev.range.n1 - dev.range.n0 + 1)
                            : size_t(S.num_faces());
    if (visited.size() != expected)
        throw numeric_error("patch not fully reachable from the seed face");
    return dev;
}

std::function<ExtComplex(Lift)> position_function(const DevelopingMap& dev) {
    const auto* pos = &dev.pos;
    return [pos](Lift l) -> ExtComplex {
        auto it = pos->find(l);
        if (it == pos->end())
            throw validation_error("no position for vertex " + std::to_string(l.v) +
                                   " at word (" + std::to_string(l.w[0]) + "," +
                                   std::to_string(l.w[1]) + ")");
        return it->second;
    };
}

std::vector<std::pair<Lift, Lift>> matched_lift_pairs(const Surface& S,
                                                      const DevelopingMap& dev, int r) {
    (void)S;
    DeckWord step = r == 0 ? DeckWord{1, 0} : DeckWord{0, 1};
    std::vector<Lift> keys;
    keys.reserve(dev.pos.size());
    for (auto& [l, z] : dev.pos) keys.push_back(l);
    std::sort(keys.begin(), keys.end());
    std::vector<std::pair<Lift, Lift>> pairs;
    for (const Lift& l : keys) {
        Lift m{l.v, word_add(l.w, step)};
        if (dev.pos.count(m)) pairs.push_back({l, m});
    }
    return pairs;
}

HolonomyMaps holonomy(const Surface& S, const DevelopingMap& dev, double tol) {
    if (S.genus != 1) throw validation_error("holonomy requires a genus 1 surface");
    HolonomyMaps H;
    for (int r = 0; r < 2; ++r) {
        auto pairs = matched_lift_pairs(S, dev, r);
        std::array<ExtComplex, 3> src, dst;
        int chosen = 0;
        for (auto& [la, lb] : pairs) {
            ExtComplex za = dev.pos.at(la), zb = dev.pos.at(lb);
            bool ok = true;
            for (int i = 0; i < chosen && ok; ++i)
                ok = chordal(src[i], za) > 1e-9 && chordal(dst[i], zb) > 1e-9;
            if (!ok) continue;
            src[chosen] = za;
            dst[chosen] = zb;
            if (++chosen == 3) break;
        }
        if (chosen < 3)
            throw numeric_error("not enough distinct lifts to determine holonomy");
        MoebiusMap rho = moebius_through(src, dst);
        for (auto& [la, lb] : pairs) {
            double d = chordal(rho.apply(dev.pos.at(la)), dev.pos.at(lb));
            H.max_pair_error = std::max(H.max_pair_error, d);
        }
        (r == 0 ? H.rho1 : H.rho2) = rho;
    }
    if (H.max_pair_error > tol)
        throw numeric_error("holonomy deviates from the developed pattern by " +
                            std::to_string(H.max_pair_error));
    return H;
}

namespace {

double mat_dist(const MoebiusMap& m, const MoebiusMap& n) {
    return std::abs(m.a - n.a) + std::abs(m.b - n.b) + std::abs(m.c - n.c) +
           std::abs(m.d - n.d);
}

// Conjugates rho by the normalizer and reads off the value making it
// z -> z + beta (translation = true) or z -> alpha z.
Complex normal_form_value(const MoebiusMap& N, const MoebiusMap& rho, bool translation,
                          double tol) {
    MoebiusMap c = N.compose(rho.normalized()).compose(N.inverse()).normalized();
    if (std::real(c.a) < 0.0) c = MoebiusMap{-c.a, -c.b, -c.c, -c.d};
    if (translation) {
        if (std::abs(c.c) > tol || std::abs(c.a - c.d) > tol)
            throw numeric_error("holonomy pair is not simultaneously triangular");
        return c.b / c.a;
    }
    if (std::abs(c.b) > tol || std::abs(c.c) > tol)
        throw numeric_error("holonomy pair is not simultaneously diagonal");
    return c.a / c.d;
}

// Fixed points with thresholds scaled to the classification tolerance, so a
// map fitted from floating point layouts snaps to the nearby exact form
// instead of producing a spurious pair of nearly coincident fixed points.
std::vector<ExtComplex> fixed_points_tol(const MoebiusMap& m, double tol) {
    MoebiusMap n = m.normalized();
    double scale = std::abs(n.a) + std::abs(n.b) + std::abs(n.c) + std::abs(n.d);
    if (std::abs(n.c) <= tol * scale) {
        if (std::abs(n.a - n.d) <= tol * scale) return {ExtComplex::infinity()};
        return {ExtComplex::infinity(), ExtComplex(n.b / (n.d - n.a))};
    }
    Complex trc = n.trace();
    Complex disc = trc * trc - 4.0;
    if (std::abs(disc) <= tol) return {ExtComplex((n.a - n.d) / (2.0 * n.c))};
    Complex s = std::sqrt(disc);
    return {ExtComplex((n.a - n.d + s) / (2.0 * n.c)),
            ExtComplex((n.a - n.d - s) / (2.0 * n.c))};
}

}  // namespace

HolonomyClassification classify_holonomy(const HolonomyMaps& H, double tol) {
    HolonomyClassification cls;
    MoebiusMap r1 = H.rho1.normalized(), r2 = H.rho2.normalized();
    bool id1 = r1.is_identity(tol), id2 = r2.is_identity(tol);

    MoebiusMap comm =
        r1.compose(r2).compose(r1.inverse()).compose(r2.inverse()).normalized();
    double comm_plus = mat_dist(comm, MoebiusMap::identity());
    double comm_minus = mat_dist(comm, MoebiusMap{-1.0, 0.0, 0.0, -1.0});
    cls.commutator_error = std::min(comm_plus, comm_minus);

    if (id1 && id2) {
        cls.type = HolonomyType::Identity;
        return cls;
    }

    const MoebiusMap* anchor = &r1;
    const MoebiusMap* other = &r2;
    bool anchor_is_first = true;
    if (id1 || (!id2 && std::abs(r2.trace() * r2.trace() - 4.0) >
                            std::abs(r1.trace() * r1.trace() - 4.0))) {
        anchor = &r2;
        other = &r1;
        anchor_is_first = false;
    }

    cls.fixed = fixed_points_tol(*anchor, tol);
    bool other_id = anchor_is_first ? id2 : id1;

    if (cls.fixed.size() == 1) {
        const ExtComplex& p = cls.fixed[0];
        // A shared parabolic fixed point cannot be read off reliably from the
        // second map, but commuting parabolics necessarily share it, and the
        // normal form extraction below still checks the triangular shape.
        if (!other_id && cls.commutator_error > 100 * tol)
            throw numeric_error("holonomy maps do not commute (parabolic anchor)");
        cls.type = HolonomyType::TypeI;
        cls.normalizer = p.is_inf() ? MoebiusMap::identity()
                                    : MoebiusMap{0.0, 1.0, 1.0, -p.z}.normalized();
        cls.beta[0] = normal_form_value(cls.normalizer, r1, true, tol * 100);
        cls.beta[1] = normal_form_value(cls.normalizer, r2, true, tol * 100);
        return cls;
    }

    const ExtComplex& p = cls.fixed[0];
    const ExtComplex& q = cls.fixed[1];
    auto near = [tol](const ExtComplex& x, const ExtComplex& y) {
        if (x.is_inf() || y.is_inf()) return chordal(x, y) <= tol;
        return approx_equal(x, y, tol);
    };
    ExtComplex ip = other->apply(p), iq = other->apply(q);
    bool fixes = near(ip, p) && near(iq, q);
    bool swaps = near(ip, q) && near(iq, p);
    if (fixes) {
        cls.type = HolonomyType::TypeII;
        if (p.is_inf()) cls.normalizer = MoebiusMap{0.0, 1.0, 1.0, -q.z}.normalized();
        else if (q.is_inf()) cls.normalizer = MoebiusMap{1.0, -p.z, 0.0, 1.0};
        else cls.normalizer = MoebiusMap{1.0, -p.z, 1.0, -q.z}.normalized();
        cls.alpha[0] = normal_form_value(cls.normalizer, r1, false, tol * 100);
        cls.alpha[1] = normal_form_value(cls.normalizer, r2, false, tol * 100);
        return cls;
    }
    if (swaps) {
        if (comm_minus > 100 * tol)
            throw numeric_error("fixed points exchanged but commutator is far from minus "
                                "identity");
        cls.type = HolonomyType::TypeIII;
        return cls;
    }
    throw numeric_error("holonomy maps do not commute");
}

DevelopingMap affine_normalize(const DevelopingMap& dev, const HolonomyClassification& cls) {
    DevelopingMap out;
    out.range = dev.range;
    out.seed_face = dev.seed_face;
    out.max_conflict = dev.max_conflict;
    for (auto& [l, z] : dev.pos) {
        ExtComplex nz = cls.normalizer.apply(z);
        if (nz.is_inf())
            throw numeric_error("vertex " + std::to_string(l.v) +
                                " sits at a holonomy fixed point");
        out.pos.emplace(l, nz);
    }
    return out;
}

namespace {

// Shortest dual path of laid out face lifts from (f0, (0,0)) to (f0, step).
std::vector<Complex> center_path(const Surface& S, const DevelopingMap& dev,
                                 int f0, DeckWord step) {
    auto usable = [&](int f, DeckWord w) {
        for (int t = 0; t < 3; ++t) {
            auto it = dev.pos.find(Lift{S.faces[f][t], word_add(w, S.corner_off[f][t])});
            if (it == dev.pos.end() || it->second.is_inf()) return false;
        }
        return true;
    };
    Lift start{f0, {0, 0}}, goal{f0, step};
    if (!usable(f0, {0, 0}) || !usable(f0, step))
        throw validation_error("patch too small to span a deck generator");
    std::unordered_map<Lift, std::pair<Lift, int>, LiftHash> parent;
    parent[start] = {start, -1};
    std::deque<Lift> q{start};
    bool found = false;
    while (!q.empty() && !found) {
        Lift cur = q.front();
        q.pop_front();
        for (int t = 0; t < 3 && !found; ++t) {
            int h = 3 * cur.v + t;
            int g = S.face_of(S.twin[h]);
            DeckWord gw = S.neighbor_word(h, cur.w);
            Lift nxt{g, gw};
            if (parent.count(nxt) || !usable(g, gw)) continue;
            parent[nxt] = {cur, h};
            if (nxt == goal) found = true;
            else q.push_back(nxt);
        }
    }
    if (!found) throw numeric_error("no dual path across the patch for the modulus");

    std::vector<Lift> path;
    for (Lift cur = goal;; cur = parent[cur].first) {
        path.push_back(cur);
        if (cur == start) break;
    }
    std::reverse(path.begin(), path.end());

    std::vector<Complex> centers;
    for (const Lift& lf : path) {
        std::array<ExtComplex, 3> z;
        for (int t = 0; t < 3; ++t)
            z[t] = dev.pos.at(Lift{S.faces[lf.v][t], word_add(lf.w, S.corner_off[lf.v][t])});
        Circumcircle cc = circumcircle(z[0], z[1], z[2]);
        if (cc.is_line)
            throw numeric_error("collinear face on the modulus path");
        centers.push_back(cc.center);
    }
    // drop repeated centers of cocircular neighbors, the chain ratios skip them
    std::vector<Complex> out;
    for (Complex c : centers) {
        if (!out.empty() && std::abs(c - out.back()) <= 1e-12 * (1.0 + std::abs(c)))
            continue;
        out.push_back(c);
    }
    return out;
}

}  // namespace

ModulusReport conformal_modulus(const Surface& S, const DevelopingMap& dev,
                                const HolonomyMaps& H, const HolonomyClassification& cls) {
    if (S.genus != 1) throw validation_error("conformal modulus requires a torus");
    if (cls.type != HolonomyType::TypeI && cls.type != HolonomyType::TypeII)
        throw validation_error("conformal modulus needs holonomy of type I or II");

    DevelopingMap ndev = affine_normalize(dev, cls);
    ModulusReport R;

    for (int r = 0; r < 2; ++r) {
        MoebiusMap rho = (r == 0 ? H.rho1 : H.rho2).normalized();
        MoebiusMap nrho =
            cls.normalizer.compose(rho).compose(cls.normalizer.inverse()).normalized();
        DeckWord step = r == 0 ? DeckWord{1, 0} : DeckWord{0, 1};
        std::vector<Complex> w = center_path(S, ndev, ndev.seed_face, step);
        if (w.size() < 2) throw numeric_error("modulus path degenerated to a point");
        ExtComplex last = nrho.apply(ExtComplex(w[1]));
        if (last.is_inf()) throw numeric_error("modulus path image at infinity");
        w.push_back(last.z);

        Complex h = 0.0;
        for (size_t t = 1; t + 1 < w.size(); ++t) {
            Complex num = w[t + 1] - w[t];
            Complex den = w[t] - w[t - 1];
            if (num == 0.0 || den == 0.0)
                throw numeric_error("repeated circumcenter on the modulus path");
            Complex term = std::log(num / den);
            if (std::abs(std::imag(term)) > kPi * 0.97) R.branch_warning = true;
            h += term;
        }
        (r == 0 ? R.h1 : R.h2) = h;

        Complex target = cls.type == HolonomyType::TypeII ? cls.alpha[r] : Complex(1.0);
        R.residual = std::max(R.residual, std::abs(std::exp(h) - target) / std::abs(target));
    }

    if (cls.type == HolonomyType::TypeI) {
        R.euclidean = true;
        R.c = 0.0;
        if (cls.beta[0] == 0.0 || cls.beta[1] == 0.0)
            throw numeric_error("vanishing holonomy translation");
        R.tau = cls.beta[1] / cls.beta[0];
        if (std::imag(R.tau) <= 0.0) {
            R.tau = cls.beta[0] / cls.beta[1];
            R.swapped = true;
        }
    } else {
        R.c = R.h1;
        R.tau = R.h2 / R.h1;
        if (std::imag(R.tau) <= 0.0) {
            R.c = R.h2;
            R.tau = R.h1 / R.h2;
            R.swapped = true;
        }
    }
    if (std::imag(R.tau) <= 1e-12)
        throw numeric_error("modulus is degenerate, lattice collapses to a line");
    return R;
}

}  // namespace crpat
