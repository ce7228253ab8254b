#pragma once
// Half-edge combinatorics of closed oriented triangulated surfaces of genus
// 0 or 1, with per-half-edge deck labels describing the universal torus cover.

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "crpat/common.h"

namespace crpat {

// Deck transformation word (m, n) in the Z^2 cover of a torus.
using DeckWord = std::array<int, 2>;

inline DeckWord word_add(DeckWord a, DeckWord b) { return {a[0] + b[0], a[1] + b[1]}; }
inline DeckWord word_sub(DeckWord a, DeckWord b) { return {a[0] - b[0], a[1] - b[1]}; }
inline DeckWord word_neg(DeckWord a) { return {-a[0], -a[1]}; }

// A vertex of the cover: base vertex plus deck word.
struct Lift {
    int v = 0;
    DeckWord w{0, 0};
    bool operator==(const Lift& o) const { return v == o.v && w == o.w; }
    bool operator<(const Lift& o) const {
        if (v != o.v) return v < o.v;
        return w < o.w;
    }
};

struct LiftHash {
    size_t operator()(const Lift& l) const {
        uint64_t h = uint64_t(uint32_t(l.v));
        h = h * 1000003u + uint64_t(uint32_t(l.w[0] + (1 << 20)));
        h = h * 1000003u + uint64_t(uint32_t(l.w[1] + (1 << 20)));
        return std::hash<uint64_t>{}(h);
    }
};

// Half-edge h = 3 f + t runs from corner t to corner t + 1 (mod 3) of face f.
// Faces are counterclockwise triples; the star list of a vertex walks its
// outgoing half-edges in clockwise order.
struct Surface {
    int genus = 0;
    int num_vertices = 0;
    int num_edges = 0;
    std::vector<std::array<int, 3>> faces;
    std::vector<int> twin;      // half-edge -> half-edge
    std::vector<int> edge_of;   // half-edge -> dense edge id
    std::vector<int> edge_rep;  // edge id -> smallest half-edge on it
    std::vector<DeckWord> deck; // per half-edge, all zero for genus 0
    std::vector<std::vector<int>> star;            // outgoing half-edges, clockwise
    std::vector<std::array<DeckWord, 3>> corner_off;  // word offset of each face corner

    int num_faces() const { return int(faces.size()); }
    int num_halfedges() const { return 3 * int(faces.size()); }
    int face_of(int h) const { return h / 3; }
    int corner_of(int h) const { return h % 3; }
    int next(int h) const { return 3 * (h / 3) + (h % 3 + 1) % 3; }
    int origin(int h) const { return faces[h / 3][h % 3]; }
    int dest(int h) const { return faces[h / 3][(h % 3 + 1) % 3]; }

    // Lift of the origin corner of h when face_of(h) sits at word w.
    Lift origin_lift(int h, DeckWord w) const {
        return Lift{origin(h), word_add(w, corner_off[h / 3][h % 3])};
    }
    Lift dest_lift(int h, DeckWord w) const {
        return Lift{dest(h), word_add(w, corner_off[h / 3][(h % 3 + 1) % 3])};
    }
    // Word of the neighbor face across h when face_of(h) sits at word w.
    DeckWord neighbor_word(int h, DeckWord w) const;
};

// Builds and validates the half-edge structure. Deck labels are keyed by
// half-edge id; for genus 1 an empty map requests automatic derivation via
// spanning trees (possible only when directed vertex pairs are unambiguous).
Surface build_surface(const std::vector<std::array<int, 3>>& faces, int genus,
                      const std::map<int, DeckWord>& deck_labels = {});

// The m-by-n grid torus with unit-square cells split along one diagonal.
Surface regular_torus(int m, int n);

struct PatchRange {
    int m0 = 0, m1 = 0, n0 = 0, n1 = 0;  // inclusive bounds
    bool contains(DeckWord w) const {
        return w[0] >= m0 && w[0] <= m1 && w[1] >= n0 && w[1] <= n1;
    }
};

struct LiftedFace {
    int f = 0;
    DeckWord w{0, 0};
    std::array<Lift, 3> corners;
};

// A finite piece of the torus cover: every vertex lift with word in the
// range, every face lift based in the range (corner lifts may step outside),
// and closed half-edge walks generating the two deck directions.
struct CoverPatch {
    PatchRange range;
    std::vector<Lift> lifted_vertices;
    std::vector<LiftedFace> lifted_faces;
    std::vector<int> gamma1, gamma2;  // half-edge walks from vertex walk_base
    int walk_base = 0;
};

CoverPatch lift_patch(const Surface& S, const PatchRange& range);

// A simple closed path in the dual graph: a face sequence where consecutive
// faces share the crossed primal edge, no face or edge repeated.
struct DualCycle {
    std::vector<int> faces;      // visited faces, cyclic
    std::vector<int> halfedges;  // halfedges[i] sits in faces[i], crosses to faces[i+1]
    DeckWord total{0, 0};        // deck displacement around the cycle
    bool contractible = false;
    int enclosed = -1;        // vertex lifts on the disk side, contractible only
    int enclosed_other = -1;  // genus 0: count on the complementary side
};

std::vector<DualCycle> dual_cycles(const Surface& S, int max_len = 12);

}  // namespace crpat
