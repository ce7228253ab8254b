#pragma once
// Layout of a valid cross ratio system in the plane, its holonomy
// representation, and the conformal modulus of torus patterns.

#include <unordered_map>
#include <vector>

#include "crpat/crsys.h"

namespace crpat {

enum class TraversalOrder { BreadthFirst, DepthFirst };

struct DevelopOptions {
    PatchRange range{0, 1, 0, 1};  // face lift words to lay out (genus 1)
    std::array<ExtComplex, 3> seed{ExtComplex(0.0, 0.0), ExtComplex(1.0, 0.0),
                                   ExtComplex(0.5, 0.8660254037844386)};
    int seed_face = 0;
    TraversalOrder order = TraversalOrder::BreadthFirst;
    double conflict_tol = 1e-6;  // relative disagreement allowed on revisits
};

struct DevelopingMap {
    std::unordered_map<Lift, ExtComplex, LiftHash> pos;
    PatchRange range{0, 0, 0, 0};
    int seed_face = 0;
    double max_conflict = 0.0;
};

DevelopingMap develop(const Surface& S, const CrossRatioSystem& X,
                      const DevelopOptions& opt = {});

// Lookup closure over the laid out positions; throws on missing lifts.
std::function<ExtComplex(Lift)> position_function(const DevelopingMap& dev);

// Lift pairs differing by one deck generator (r = 0 or 1), both laid out.
std::vector<std::pair<Lift, Lift>> matched_lift_pairs(const Surface& S,
                                                      const DevelopingMap& dev, int r);

struct HolonomyMaps {
    MoebiusMap rho1, rho2;
    double max_pair_error = 0.0;  // worst deviation over all matched lifts
};

HolonomyMaps holonomy(const Surface& S, const DevelopingMap& dev, double tol = 1e-6);

enum class HolonomyType { Identity, TypeI, TypeII, TypeIII };

// Commuting pairs in PSL(2, C) up to sign: a common fixed point with both
// maps parabolic (type I, translations after moving the point to infinity),
// a common fixed pair (type II, scalings after moving it to 0 and infinity),
// or an exchanged fixed pair with anticommuting matrices (type III).
struct HolonomyClassification {
    HolonomyType type = HolonomyType::Identity;
    MoebiusMap normalizer;                  // types I and II
    std::array<Complex, 2> alpha{1.0, 1.0}; // type II multipliers
    std::array<Complex, 2> beta{0.0, 0.0};  // type I translations
    std::vector<ExtComplex> fixed;          // fixed points of the anchor map
    double commutator_error = 0.0;
};

HolonomyClassification classify_holonomy(const HolonomyMaps& H, double tol = 1e-7);

// Applies the classification normalizer to every position.
DevelopingMap affine_normalize(const DevelopingMap& dev, const HolonomyClassification& cls);

struct ModulusReport {
    Complex h1{0.0}, h2{0.0};  // multiplier logs along the two deck generators
    Complex c{0.0};
    Complex tau{0.0};
    bool euclidean = false;
    bool swapped = false;         // generators exchanged so that Im tau > 0
    bool branch_warning = false;  // a log term came close to the branch cut
    double residual = 0.0;        // |exp(h_r) - alpha_r| consistency error
};

// The modulus of a torus pattern with type I or II holonomy, computed along
// dual paths of circumcenters in the normalized layout.
ModulusReport conformal_modulus(const Surface& S, const DevelopingMap& dev,
                                const HolonomyMaps& H, const HolonomyClassification& cls);

}  // namespace crpat
