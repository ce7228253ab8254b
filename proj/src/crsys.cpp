#include "crpat/crsys.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace crpat {

namespace {

void check_sizes(const Surface& S, const CrossRatioSystem& X) {
    if (int(X.cr.size()) != S.num_edges)
        throw validation_error("cross ratio count " + std::to_string(X.cr.size()) +
                               " does not match edge count " + std::to_string(S.num_edges));
    for (int e = 0; e < S.num_edges; ++e)
        if (X.cr[e] == 0.0)
            throw validation_error("zero cross ratio on edge " + std::to_string(e));
}

}  // namespace

double PhiResidual::max_abs() const {
    double m = 0.0;
    for (auto& p : phi1) m = std::max(m, std::abs(p));
    for (auto& p : phi2) m = std::max(m, std::abs(p));
    return m;
}

std::vector<Complex> star_values(const Surface& S, const CrossRatioSystem& X, int v) {
    check_sizes(S, X);
    std::vector<Complex> out;
    out.reserve(S.star[v].size());
    for (int h : S.star[v]) out.push_back(X.cr[S.edge_of[h]]);
    return out;
}

PhiResidual phi_residual(const Surface& S, const CrossRatioSystem& X) {
    check_sizes(S, X);
    PhiResidual R;
    R.phi1.resize(S.num_vertices);
    R.phi2.resize(S.num_vertices);
    for (int v = 0; v < S.num_vertices; ++v) {
        Complex prod = 1.0, sum = 0.0;
        for (int h : S.star[v]) {
            prod *= X.cr[S.edge_of[h]];
            sum += prod;
        }
        R.phi1[v] = prod - 1.0;
        R.phi2[v] = sum;
    }
    return R;
}

bool is_valid(const Surface& S, const CrossRatioSystem& X, double tol) {
    return phi_residual(S, X).max_abs() <= tol;
}

int ramification_order(const Surface& S, const CrossRatioSystem& X, int v, double tol) {
    check_sizes(S, X);
    double sum = 0.0;
    for (int h : S.star[v]) sum += std::arg(X.cr[S.edge_of[h]]);
    double s = sum / (2.0 * kPi);
    int si = int(std::lround(s));
    if (std::abs(sum - 2.0 * kPi * si) > tol * (double(S.star[v].size()) + 1.0))
        throw numeric_error("star argument sum at vertex " + std::to_string(v) +
                            " is not a multiple of 2 pi");
    return si;
}

Complex edge_cross_ratio(const Surface& S, const std::function<ExtComplex(Lift)>& pos,
                         int e) {
    int h = S.edge_rep[e];
    int f = S.face_of(h), t = S.corner_of(h);
    int h2 = S.twin[h];
    int g = S.face_of(h2), t2 = S.corner_of(h2);
    DeckWord fw{0, 0};
    DeckWord gw = S.neighbor_word(h, fw);
    ExtComplex zi = pos(S.origin_lift(h, fw));
    ExtComplex zj = pos(S.dest_lift(h, fw));
    ExtComplex zk = pos(Lift{S.faces[f][(t + 2) % 3], word_add(fw, S.corner_off[f][(t + 2) % 3])});
    ExtComplex zl = pos(Lift{S.faces[g][(t2 + 2) % 3], word_add(gw, S.corner_off[g][(t2 + 2) % 3])});
    return cross_ratio(zi, zj, zk, zl);
}

CrossRatioSystem extract_cross_ratios(const Surface& S,
                                      const std::function<ExtComplex(Lift)>& pos) {
    CrossRatioSystem X;
    X.cr.resize(S.num_edges);
    for (int e = 0; e < S.num_edges; ++e) X.cr[e] = edge_cross_ratio(S, pos, e);
    return X;
}

StarLayout close_vertex_star(const std::vector<Complex>& star_cr) {
    size_t n = star_cr.size();
    if (n == 0) throw validation_error("empty vertex star");
    for (Complex c : star_cr)
        if (c == 0.0) throw validation_error("zero cross ratio in vertex star");
    StarLayout L;
    L.z.resize(n + 2);
    L.z[0] = 0.0;
    Complex P = 1.0;
    L.z[1] = L.z[0] + P;
    for (size_t k = 1; k <= n; ++k) {
        P *= star_cr[k - 1];
        L.z[k + 1] = L.z[k] + P;
    }
    L.closure_gap = std::max(std::abs(L.z[n] - L.z[0]), std::abs(L.z[n + 1] - L.z[1]));
    return L;
}

DelaunayReport is_delaunay(const Surface& S, const CrossRatioSystem& X, double atol) {
    check_sizes(S, X);
    DelaunayReport R;
    int E = S.num_edges, F = S.num_faces();

    std::vector<char> deleted(E, 0);
    for (int e = 0; e < E; ++e) {
        double a = std::arg(X.cr[e]);
        if (a < -atol || a >= kPi - atol) {
            R.reason = "edge " + std::to_string(e) + " has argument " + std::to_string(a) +
                       " outside [0, pi)";
            return R;
        }
        if (std::abs(a) <= atol) deleted[e] = 1;
    }

    for (int v = 0; v < S.num_vertices; ++v) {
        bool kept = false;
        for (int h : S.star[v]) kept = kept || !deleted[S.edge_of[h]];
        if (!kept) {
            R.reason = "vertex " + std::to_string(v) + " lies on no edge of the merged complex";
            return R;
        }
    }

    // merge faces across the deleted edges and test each region for being a
    // disk via its Euler characteristic, with corners glued along deletions
    std::vector<int> uf(F);
    std::iota(uf.begin(), uf.end(), 0);
    std::function<int(int)> find = [&](int x) {
        while (uf[x] != x) x = uf[x] = uf[uf[x]];
        return x;
    };
    for (int e = 0; e < E; ++e)
        if (deleted[e]) {
            int a = find(S.face_of(S.edge_rep[e]));
            int b = find(S.face_of(S.twin[S.edge_rep[e]]));
            uf[a] = b;
        }

    std::vector<int> cuf(3 * F);
    std::iota(cuf.begin(), cuf.end(), 0);
    std::function<int(int)> cfind = [&](int x) {
        while (cuf[x] != x) x = cuf[x] = cuf[cuf[x]];
        return x;
    };
    for (int e = 0; e < E; ++e)
        if (deleted[e]) {
            int h = S.edge_rep[e], h2 = S.twin[h];
            cuf[cfind(h)] = cfind(S.next(h2));  // origin corners coincide
            cuf[cfind(S.next(h))] = cfind(h2);
        }

    std::vector<int> region_faces(F, 0), region_del(F, 0);
    for (int f = 0; f < F; ++f) region_faces[find(f)]++;
    for (int e = 0; e < E; ++e)
        if (deleted[e]) region_del[find(S.face_of(S.edge_rep[e]))]++;
    std::vector<std::vector<int>> region_corners(F);
    for (int c = 0; c < 3 * F; ++c) region_corners[find(c / 3)].push_back(c);

    for (int r = 0; r < F; ++r) {
        if (find(r) != r) continue;
        int t = region_faces[r], d = region_del[r];
        std::set<int> classes;
        for (int c : region_corners[r]) classes.insert(cfind(c));
        int chi = int(classes.size()) - (3 * t - d) + t;
        if (chi != 1) {
            R.reason = "merged region around face " + std::to_string(r) +
                       " is not a disk (Euler characteristic " + std::to_string(chi) + ")";
            return R;
        }
    }

    R.delaunay = true;
    return R;
}

AngleStructureReport validate_angle_structure(const Surface& S, const AngleStructure& A,
                                              int max_cycle_len, bool check_cycles) {
    AngleStructureReport R;
    if (int(A.theta.size()) != S.num_edges)
        throw validation_error("angle count does not match edge count");
    for (int e = 0; e < S.num_edges; ++e)
        if (!(A.theta[e] > 0.0 && A.theta[e] < kPi)) {
            R.reason = "angle on edge " + std::to_string(e) + " outside (0, pi)";
            return R;
        }
    for (int v = 0; v < S.num_vertices; ++v) {
        double sum = 0.0;
        for (int h : S.star[v]) sum += A.theta[S.edge_of[h]];
        if (std::abs(sum - 2.0 * kPi) > 1e-8) {
            R.reason = "angles around vertex " + std::to_string(v) + " sum to " +
                       std::to_string(sum) + " instead of 2 pi";
            return R;
        }
    }
    if (check_cycles) {
        for (const DualCycle& c : dual_cycles(S, max_cycle_len)) {
            if (!c.contractible) continue;
            if (c.enclosed == 1 || (S.genus == 0 && c.enclosed_other == 1)) continue;
            double sum = 0.0;
            for (int h : c.halfedges) sum += A.theta[S.edge_of[h]];
            if (sum <= 2.0 * kPi + 1e-9) {
                R.reason = "dual cycle through " + std::to_string(c.faces.size()) +
                           " faces encircling " + std::to_string(c.enclosed) +
                           " vertices has angle sum " + std::to_string(sum);
                R.witness_faces = c.faces;
                return R;
            }
        }
    }
    R.valid = true;
    return R;
}

}  // namespace crpat
