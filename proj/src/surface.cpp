#include "crpat/surface.h"

#include <algorithm>
#include <deque>
#include <set>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

namespace crpat {

DeckWord Surface::neighbor_word(int h, DeckWord w) const {
    int h2 = twin[h];
    int f = face_of(h), g = face_of(h2);
    return word_sub(word_add(word_add(w, corner_off[f][corner_of(h)]), deck[h]),
                    corner_off[g][corner_of(h2)]);
}

namespace {

struct KeyHash {
    size_t operator()(const std::tuple<int, int, int, int>& k) const {
        auto [a, b, c, d] = k;
        uint64_t h = 1469598103934665603ull;
        for (int x : {a, b, c, d}) {
            h ^= uint64_t(uint32_t(x));
            h *= 1099511628211ull;
        }
        return size_t(h);
    }
};

void match_twins(Surface& S, const std::map<int, DeckWord>& labels, bool labeled) {
    int H = S.num_halfedges();
    S.twin.assign(H, -1);

    if (!labeled) {
        // detect edges shared by more than two faces, and orientation slips
        std::map<std::pair<int, int>, int> undirected;
        for (int h = 0; h < H; ++h)
            undirected[{std::min(S.origin(h), S.dest(h)), std::max(S.origin(h), S.dest(h))}]++;
        for (auto& [k, c] : undirected)
            if (c > 2)
                throw validation_error("non-manifold edge: more than two faces share vertices " +
                                       std::to_string(k.first) + "," + std::to_string(k.second));

        std::map<std::pair<int, int>, std::vector<int>> directed;
        for (int h = 0; h < H; ++h) directed[{S.origin(h), S.dest(h)}].push_back(h);
        for (auto& [k, hs] : directed) {
            if (hs.size() == 1) continue;
            if (S.genus == 1)
                throw validation_error("deck labels required: directed vertex pair " +
                                       std::to_string(k.first) + "->" + std::to_string(k.second) +
                                       " is ambiguous");
            throw validation_error("inconsistent face orientation at edge " +
                                   std::to_string(k.first) + "->" + std::to_string(k.second));
        }
        for (int h = 0; h < H; ++h) {
            auto it = directed.find({S.dest(h), S.origin(h)});
            if (it == directed.end())
                throw validation_error("boundary edge at " + std::to_string(S.origin(h)) + "->" +
                                       std::to_string(S.dest(h)) + ", surface must be closed");
            S.twin[h] = it->second.front();
        }
    } else {
        std::unordered_map<std::tuple<int, int, int, int>, std::vector<int>, KeyHash> keyed;
        auto label_of = [&](int h) {
            auto it = labels.find(h);
            return it == labels.end() ? DeckWord{0, 0} : it->second;
        };
        for (int h = 0; h < H; ++h) {
            DeckWord l = label_of(h);
            keyed[{S.origin(h), S.dest(h), l[0], l[1]}].push_back(h);
        }
        for (int h = 0; h < H; ++h) {
            DeckWord l = label_of(h);
            auto it = keyed.find({S.dest(h), S.origin(h), -l[0], -l[1]});
            if (it == keyed.end() || it->second.empty())
                throw validation_error("no twin for half-edge " + std::to_string(h) +
                                       " (open surface or label mismatch)");
            if (it->second.size() > 1)
                throw validation_error("ambiguous twin for half-edge " + std::to_string(h) +
                                       ", duplicated labeled edge");
            int t = it->second.front();
            if (t == h)
                throw validation_error("half-edge " + std::to_string(h) + " would twin itself");
            S.twin[h] = t;
        }
    }
    for (int h = 0; h < H; ++h)
        if (S.twin[S.twin[h]] != h)
            throw validation_error("twin pairing is not an involution");
}

void assign_edges(Surface& S) {
    int H = S.num_halfedges();
    S.edge_of.assign(H, -1);
    S.edge_rep.clear();
    for (int h = 0; h < H; ++h) {
        if (S.edge_of[h] >= 0) continue;
        S.edge_of[h] = S.edge_of[S.twin[h]] = int(S.edge_rep.size());
        S.edge_rep.push_back(h);
    }
    S.num_edges = int(S.edge_rep.size());
}

// Spanning-tree derivation of deck labels for a genus 1 mesh given without
// them. Primal tree edges get the zero label, the two leftover edges after
// also removing a dual spanning tree get the unit labels, and labels on the
// dual tree edges follow from the zero-sum condition around each face.
void derive_labels(Surface& S) {
    int H = S.num_halfedges(), E = S.num_edges, F = S.num_faces();

    std::vector<char> in_primal(E, 0), seen_v(S.num_vertices, 0);
    std::deque<int> vq{0};
    seen_v[0] = 1;
    while (!vq.empty()) {
        int v = vq.front();
        vq.pop_front();
        for (int h = 0; h < H; ++h) {
            if (S.origin(h) != v) continue;
            int u = S.dest(h);
            if (seen_v[u]) continue;
            seen_v[u] = 1;
            in_primal[S.edge_of[h]] = 1;
            vq.push_back(u);
        }
    }

    std::vector<char> in_dual(E, 0), seen_f(F, 0);
    std::deque<int> fq{0};
    seen_f[0] = 1;
    while (!fq.empty()) {
        int f = fq.front();
        fq.pop_front();
        for (int t = 0; t < 3; ++t) {
            int h = 3 * f + t;
            int e = S.edge_of[h];
            if (in_primal[e]) continue;
            int g = S.face_of(S.twin[h]);
            if (seen_f[g]) continue;
            seen_f[g] = 1;
            in_dual[e] = 1;
            fq.push_back(g);
        }
    }

    std::vector<int> leftover;
    for (int e = 0; e < E; ++e)
        if (!in_primal[e] && !in_dual[e]) leftover.push_back(e);
    if (leftover.size() != 2)
        throw validation_error("label derivation expects a genus 1 mesh, found " +
                               std::to_string(leftover.size()) + " independent cycles");

    std::vector<char> known(E, 0);
    std::vector<DeckWord> edge_label(E, DeckWord{0, 0});
    for (int e = 0; e < E; ++e)
        if (in_primal[e]) known[e] = 1;
    edge_label[leftover[0]] = {1, 0};
    edge_label[leftover[1]] = {0, 1};
    known[leftover[0]] = known[leftover[1]] = 1;

    auto oriented = [&](int h) {
        DeckWord l = edge_label[S.edge_of[h]];
        return h == S.edge_rep[S.edge_of[h]] ? l : word_neg(l);
    };
    for (int pass = 0; pass < F + 1; ++pass) {
        bool progress = false, done = true;
        for (int f = 0; f < F; ++f) {
            int unknown = -1, count = 0;
            for (int t = 0; t < 3; ++t)
                if (!known[S.edge_of[3 * f + t]]) {
                    unknown = 3 * f + t;
                    ++count;
                }
            if (count == 0) continue;
            done = false;
            if (count > 1) continue;
            DeckWord s{0, 0};
            for (int t = 0; t < 3; ++t)
                if (3 * f + t != unknown) s = word_add(s, oriented(3 * f + t));
            DeckWord l = word_neg(s);
            int e = S.edge_of[unknown];
            edge_label[e] = (unknown == S.edge_rep[e]) ? l : word_neg(l);
            known[e] = 1;
            progress = true;
        }
        if (done) break;
        if (!progress) throw validation_error("label derivation failed to close all faces");
    }

    S.deck.assign(H, DeckWord{0, 0});
    for (int h = 0; h < H; ++h) S.deck[h] = oriented(h);
}

void build_stars(Surface& S) {
    S.star.assign(S.num_vertices, {});
    std::vector<std::vector<int>> outgoing(S.num_vertices);
    for (int h = 0; h < S.num_halfedges(); ++h) outgoing[S.origin(h)].push_back(h);
    for (int v = 0; v < S.num_vertices; ++v) {
        if (outgoing[v].empty())
            throw validation_error("vertex " + std::to_string(v) + " lies on no face");
        int h0 = *std::min_element(outgoing[v].begin(), outgoing[v].end());
        std::vector<int> orbit;
        std::unordered_set<int> seen;
        int h = h0;
        do {
            if (!seen.insert(h).second)
                throw validation_error("non-manifold star at vertex " + std::to_string(v));
            orbit.push_back(h);
            h = S.next(S.twin[h]);
        } while (h != h0);
        if (orbit.size() != outgoing[v].size())
            throw validation_error("non-manifold star at vertex " + std::to_string(v) +
                                   ", link is not a single cycle");
        S.star[v] = orbit;
    }
}

}  // namespace

Surface build_surface(const std::vector<std::array<int, 3>>& faces, int genus,
                      const std::map<int, DeckWord>& deck_labels) {
    if (genus != 0 && genus != 1) throw validation_error("genus must be 0 or 1");
    if (faces.empty()) throw validation_error("empty face list");

    Surface S;
    S.genus = genus;
    S.faces = faces;
    int maxv = -1;
    for (auto& f : faces)
        for (int v : f) {
            if (v < 0) throw validation_error("negative vertex index");
            maxv = std::max(maxv, v);
        }
    S.num_vertices = maxv + 1;
    {
        std::vector<char> used(S.num_vertices, 0);
        for (auto& f : faces)
            for (int v : f) used[v] = 1;
        for (int v = 0; v < S.num_vertices; ++v)
            if (!used[v])
                throw validation_error("vertex indices not contiguous, " + std::to_string(v) +
                                       " unused");
    }

    bool labeled = !deck_labels.empty();
    if (genus == 0 && labeled) {
        for (auto& [h, l] : deck_labels)
            if (l != DeckWord{0, 0})
                throw validation_error("nonzero deck label on a genus 0 mesh");
        labeled = false;
    }

    match_twins(S, deck_labels, labeled);
    assign_edges(S);

    int V = S.num_vertices, E = S.num_edges, F = S.num_faces();
    if (V - E + F != 2 - 2 * genus)
        throw validation_error("Euler characteristic " + std::to_string(V - E + F) +
                               " does not match genus " + std::to_string(genus));

    {
        std::vector<char> seen(F, 0);
        std::deque<int> q{0};
        seen[0] = 1;
        int count = 1;
        while (!q.empty()) {
            int f = q.front();
            q.pop_front();
            for (int t = 0; t < 3; ++t) {
                int g = S.face_of(S.twin[3 * f + t]);
                if (!seen[g]) {
                    seen[g] = 1;
                    ++count;
                    q.push_back(g);
                }
            }
        }
        if (count != F) throw validation_error("mesh is not connected");
    }

    if (genus == 0) {
        S.deck.assign(S.num_halfedges(), DeckWord{0, 0});
    } else if (labeled) {
        S.deck.assign(S.num_halfedges(), DeckWord{0, 0});
        for (auto& [h, l] : deck_labels) {
            if (h < 0 || h >= S.num_halfedges())
                throw validation_error("deck label on invalid half-edge " + std::to_string(h));
            S.deck[h] = l;
        }
        for (int h = 0; h < S.num_halfedges(); ++h)
            if (S.deck[S.twin[h]] != word_neg(S.deck[h]))
                throw validation_error("deck labels not antisymmetric across edge of half-edge " +
                                       std::to_string(h));
        for (int f = 0; f < F; ++f) {
            DeckWord s = word_add(word_add(S.deck[3 * f], S.deck[3 * f + 1]), S.deck[3 * f + 2]);
            if (s != DeckWord{0, 0})
                throw validation_error("deck labels around face " + std::to_string(f) +
                                       " do not sum to zero");
        }
    } else {
        derive_labels(S);
    }

    S.corner_off.assign(F, {DeckWord{0, 0}, DeckWord{0, 0}, DeckWord{0, 0}});
    for (int f = 0; f < F; ++f) {
        S.corner_off[f][1] = S.deck[3 * f];
        S.corner_off[f][2] = word_add(S.deck[3 * f], S.deck[3 * f + 1]);
    }

    build_stars(S);
    return S;
}

Surface regular_torus(int m, int n) {
    if (m < 1 || n < 1) throw validation_error("regular_torus needs positive dimensions");
    auto vid = [&](int x, int y) { return ((x % m) + m) % m + m * (((y % n) + n) % n); };
    auto span = [&](int x1, int y1, int x2, int y2) {
        auto fd = [](int a, int b) { return a >= 0 ? a / b : -((-a + b - 1) / b); };
        return DeckWord{fd(x2, m) - fd(x1, m), fd(y2, n) - fd(y1, n)};
    };

    std::vector<std::array<int, 3>> faces;
    std::map<int, DeckWord> labels;
    auto add_face = [&](std::array<std::array<int, 2>, 3> c) {
        int f = int(faces.size());
        faces.push_back({vid(c[0][0], c[0][1]), vid(c[1][0], c[1][1]), vid(c[2][0], c[2][1])});
        for (int t = 0; t < 3; ++t) {
            auto a = c[t], b = c[(t + 1) % 3];
            labels[3 * f + t] = span(a[0], a[1], b[0], b[1]);
        }
    };
    for (int y = 0; y < n; ++y)
        for (int x = 0; x < m; ++x) {
            add_face({{{x, y}, {x + 1, y}, {x, y + 1}}});
            add_face({{{x + 1, y}, {x + 1, y + 1}, {x, y + 1}}});
        }
    return build_surface(faces, 1, labels);
}

CoverPatch lift_patch(const Surface& S, const PatchRange& range) {
    if (S.genus != 1) throw validation_error("lift_patch requires a genus 1 surface");
    if (range.m1 < range.m0 || range.n1 < range.n0)
        throw validation_error("empty patch range");

    CoverPatch P;
    P.range = range;
    for (int m = range.m0; m <= range.m1; ++m)
        for (int n = range.n0; n <= range.n1; ++n)
            for (int v = 0; v < S.num_vertices; ++v)
                P.lifted_vertices.push_back(Lift{v, {m, n}});
    for (int m = range.m0; m <= range.m1; ++m)
        for (int n = range.n0; n <= range.n1; ++n)
            for (int f = 0; f < S.num_faces(); ++f) {
                LiftedFace lf;
                lf.f = f;
                lf.w = {m, n};
                for (int t = 0; t < 3; ++t)
                    lf.corners[t] = Lift{S.faces[f][t], word_add(lf.w, S.corner_off[f][t])};
                P.lifted_faces.push_back(lf);
            }

    // closed walks from a base vertex realizing the two deck generators
    P.walk_base = 0;
    const int B = 6;
    for (int r = 0; r < 2; ++r) {
        DeckWord target = r == 0 ? DeckWord{1, 0} : DeckWord{0, 1};
        std::unordered_map<Lift, int, LiftHash> parent_edge;  // lift -> incoming half-edge
        std::unordered_map<Lift, Lift, LiftHash> parent;
        Lift start{0, {0, 0}};
        std::deque<Lift> q{start};
        parent_edge[start] = -1;
        Lift goal{0, target};
        bool found = false;
        while (!q.empty() && !found) {
            Lift cur = q.front();
            q.pop_front();
            for (int h : S.star[cur.v]) {
                Lift nxt{S.dest(h), word_add(cur.w, S.deck[h])};
                if (std::abs(nxt.w[0]) > B || std::abs(nxt.w[1]) > B) continue;
                if (parent_edge.count(nxt)) continue;
                parent_edge[nxt] = h;
                parent[nxt] = cur;
                if (nxt == goal) {
                    found = true;
                    break;
                }
                q.push_back(nxt);
            }
        }
        if (!found) throw numeric_error("could not realize a deck generator as a closed walk");
        std::vector<int> walk;
        for (Lift cur = goal; parent_edge[cur] >= 0; cur = parent[cur])
            walk.push_back(parent_edge[cur]);
        std::reverse(walk.begin(), walk.end());
        (r == 0 ? P.gamma1 : P.gamma2) = walk;
    }
    return P;
}

namespace {

using LiftPair = std::pair<Lift, Lift>;

struct LiftPairHash {
    size_t operator()(const LiftPair& p) const {
        return LiftHash{}(p.first) * 2654435761u + LiftHash{}(p.second);
    }
};

LiftPair edge_lift_key(const Surface& S, int h, DeckWord face_word) {
    Lift a = S.origin_lift(h, face_word);
    Lift b = S.dest_lift(h, face_word);
    if (b < a) std::swap(a, b);
    return {a, b};
}

// Flood fill of one side of a lifted dual cycle. Returns false if the side
// is unbounded (visit count exceeded the cap); otherwise fills out the
// visited vertex lifts.
bool flood_side(const Surface& S,
                const std::unordered_set<LiftPair, LiftPairHash>& crossed,
                const std::unordered_set<Lift, LiftHash>& seeds,
                const std::unordered_set<Lift, LiftHash>& forbidden, size_t cap,
                std::unordered_set<Lift, LiftHash>& out) {
    out.clear();
    std::deque<Lift> q;
    for (const Lift& s : seeds) {
        if (out.insert(s).second) q.push_back(s);
    }
    while (!q.empty()) {
        if (out.size() > cap) return false;
        Lift cur = q.front();
        q.pop_front();
        for (int h : S.star[cur.v]) {
            DeckWord fw = word_sub(cur.w, S.corner_off[S.face_of(h)][S.corner_of(h)]);
            if (crossed.count(edge_lift_key(S, h, fw))) continue;
            Lift nxt{S.dest(h), word_add(cur.w, S.deck[h])};
            if (forbidden.count(nxt))
                throw numeric_error("dual cycle sides are not separated");
            if (out.insert(nxt).second) q.push_back(nxt);
        }
    }
    return true;
}

// Counts vertex lifts, interior edge lifts and interior face lifts of a
// flooded side and returns its Euler characteristic.
int side_euler(const Surface& S,
               const std::unordered_set<LiftPair, LiftPairHash>& crossed,
               const std::unordered_set<Lift, LiftHash>& side) {
    long ecount2 = 0;
    std::set<std::pair<int, DeckWord>> faces_in;
    for (const Lift& l : side) {
        for (int h : S.star[l.v]) {
            int f = S.face_of(h);
            DeckWord fw = word_sub(l.w, S.corner_off[f][S.corner_of(h)]);
            if (!crossed.count(edge_lift_key(S, h, fw))) {
                Lift nxt{S.dest(h), word_add(l.w, S.deck[h])};
                if (side.count(nxt)) ++ecount2;
            }
            bool inside = true;
            for (int t = 0; t < 3 && inside; ++t)
                inside = side.count(Lift{S.faces[f][t], word_add(fw, S.corner_off[f][t])}) > 0;
            if (inside) faces_in.insert({f, fw});
        }
    }
    return int(side.size()) - int(ecount2 / 2) + int(faces_in.size());
}

void classify_cycle(const Surface& S, DualCycle& c) {
    int n = int(c.faces.size());
    std::vector<DeckWord> words(n);
    words[0] = {0, 0};
    for (int i = 0; i + 1 < n; ++i) words[i + 1] = S.neighbor_word(c.halfedges[i], words[i]);
    c.total = S.neighbor_word(c.halfedges[n - 1], words[n - 1]);
    c.contractible = (c.total == DeckWord{0, 0});
    if (!c.contractible) return;

    std::unordered_set<LiftPair, LiftPairHash> crossed;
    for (int i = 0; i < n; ++i) crossed.insert(edge_lift_key(S, c.halfedges[i], words[i]));

    // Seed the two sides. In face i the curve enters through one edge and
    // leaves through another; the corner shared by those two edges (the
    // pivot) is cut off from the remaining corners. Relative to the travel
    // direction the pivot lies right when the exit edge is the combinatorial
    // successor of the entry edge, left otherwise.
    std::unordered_set<Lift, LiftHash> left, right;
    for (int i = 0; i < n; ++i) {
        int h_in = S.twin[c.halfedges[(i + n - 1) % n]];
        int h_out = c.halfedges[i];
        int t_in = S.corner_of(h_in), t_out = S.corner_of(h_out);
        int pivot;
        if (t_out == (t_in + 1) % 3) pivot = t_out;       // shared corner, pivot right
        else if (t_in == (t_out + 1) % 3) pivot = t_in;   // pivot left
        else throw numeric_error("dual cycle enters and leaves a face through the same edge");
        bool pivot_right = (t_out == (t_in + 1) % 3);
        int f = c.faces[i];
        for (int t = 0; t < 3; ++t) {
            Lift l{S.faces[f][t], word_add(words[i], S.corner_off[f][t])};
            ((t == pivot) == pivot_right ? right : left).insert(l);
        }
    }
    for (const Lift& l : left)
        if (right.count(l)) throw numeric_error("dual cycle sides are not separated");

    size_t cap = size_t(4 * (c.faces.size() + 4) * (c.faces.size() + 4)) * S.num_vertices + 64;
    std::unordered_set<Lift, LiftHash> lfill, rfill;
    bool lb = flood_side(S, crossed, left, right, cap, lfill);
    bool rb = flood_side(S, crossed, right, left, cap, rfill);
    if (S.genus == 1) {
        if (lb == rb) throw numeric_error("contractible dual cycle with no bounded side");
        const auto& disk = lb ? lfill : rfill;
        if (side_euler(S, crossed, disk) != 1)
            throw numeric_error("bounded side of a dual cycle is not a disk");
        c.enclosed = int(disk.size());
    } else {
        if (!lb || !rb) throw numeric_error("unbounded dual cycle side on a sphere");
        if (side_euler(S, crossed, lfill) != 1 || side_euler(S, crossed, rfill) != 1)
            throw numeric_error("dual cycle side on a sphere is not a disk");
        c.enclosed = int(lfill.size());
        c.enclosed_other = int(rfill.size());
    }
}

}  // namespace

std::vector<DualCycle> dual_cycles(const Surface& S, int max_len) {
    int F = S.num_faces();
    // dual adjacency: for each face, the half-edges leading to distinct faces
    std::vector<std::vector<int>> out(F);
    for (int h = 0; h < S.num_halfedges(); ++h)
        if (S.face_of(h) != S.face_of(S.twin[h])) out[S.face_of(h)].push_back(h);

    std::vector<DualCycle> cycles;
    std::vector<int> path_faces, path_halfedges;
    std::vector<char> on_path(F, 0);
    std::vector<char> edge_used(S.num_edges, 0);

    std::function<void(int, int)> dfs = [&](int start, int cur) {
        for (int h : out[cur]) {
            int e = S.edge_of[h];
            if (edge_used[e]) continue;
            int g = S.face_of(S.twin[h]);
            if (g < start) continue;
            if (g == start && path_faces.size() >= 2) {
                bool canonical;
                if (path_faces.size() == 2)
                    canonical = S.edge_of[path_halfedges[0]] < e;
                else
                    canonical = path_faces[1] < path_faces.back();
                if (canonical) {
                    DualCycle c;
                    c.faces = path_faces;
                    c.halfedges = path_halfedges;
                    c.halfedges.push_back(h);
                    classify_cycle(S, c);
                    cycles.push_back(std::move(c));
                }
                continue;
            }
            if (on_path[g] || g == start) continue;
            if (int(path_faces.size()) >= max_len) continue;
            on_path[g] = 1;
            edge_used[e] = 1;
            path_faces.push_back(g);
            path_halfedges.push_back(h);
            dfs(start, g);
            path_faces.pop_back();
            path_halfedges.pop_back();
            on_path[g] = 0;
            edge_used[e] = 0;
        }
    };

    for (int s = 0; s < F; ++s) {
        path_faces = {s};
        path_halfedges = {};
        on_path.assign(F, 0);
        on_path[s] = 1;
        dfs(s, s);
    }
    return cycles;
}

}  // namespace crpat
