#pragma once
// Cross ratio systems on a surface: the closing conditions around vertex
// stars, angle structures, Delaunay checks and ramification orders.

#include <functional>
#include <string>
#include <vector>

#include "crpat/moebius.h"
#include "crpat/surface.h"

namespace crpat {

// One nonzero complex number per edge.
struct CrossRatioSystem {
    std::vector<Complex> cr;  // indexed by edge id
};

// One angle per edge, each in (0, pi).
struct AngleStructure {
    std::vector<double> theta;
};

// The two closing conditions at a vertex, computed from the clockwise star.
// With P_t the product of the first t + 1 star values, phi1 = prod - 1 and
// phi2 = sum of all P_t. Both vanish at every vertex of a valid system.
struct PhiResidual {
    std::vector<Complex> phi1;  // per vertex, product minus one
    std::vector<Complex> phi2;  // per vertex, telescoping sum
    double max_abs() const;
};

// Star values in clockwise order: cr of the edge of each outgoing half-edge.
std::vector<Complex> star_values(const Surface& S, const CrossRatioSystem& X, int v);

PhiResidual phi_residual(const Surface& S, const CrossRatioSystem& X);

bool is_valid(const Surface& S, const CrossRatioSystem& X, double tol);

// Winding number of the star argument sum: sum of Arg cr over the star of v
// is 2 pi s with s a positive integer for valid systems; s = 1 at regular
// points. Throws if the sum is not near an integer multiple.
int ramification_order(const Surface& S, const CrossRatioSystem& X, int v, double tol);

// Cross ratios of a realized pattern. Positions are one lift per vertex for
// genus 0, or a map over cover lifts for genus 1 that must contain every
// lift referenced by the chosen face words.
Complex edge_cross_ratio(const Surface& S,
                         const std::function<ExtComplex(Lift)>& pos, int e);
CrossRatioSystem extract_cross_ratios(const Surface& S,
                                      const std::function<ExtComplex(Lift)>& pos);

// Reconstruction of a vertex star from its cross ratio values, normalized to
// z_center = infinity, z_0 = 0, z_1 = 1. Returns positions z_0 .. z_{n+1};
// closure means z_n = z_0 and z_{n+1} = z_1.
struct StarLayout {
    std::vector<Complex> z;
    double closure_gap = 0.0;
};
StarLayout close_vertex_star(const std::vector<Complex>& star_cr);

// Delaunay test for a cross ratio system: arguments lie in [0, pi), and the
// complex obtained by merging faces across argument zero edges is still a
// polygonal decomposition (every merged region a disk, every vertex on a
// kept edge).
struct DelaunayReport {
    bool delaunay = false;
    std::string reason;  // empty when delaunay
};
DelaunayReport is_delaunay(const Surface& S, const CrossRatioSystem& X, double atol = 1e-8);

// Checks a coherent angle structure: every angle in (0, pi), star sums equal
// 2 pi, and every simple contractible dual cycle not encircling exactly one
// vertex has angle sum above 2 pi.
struct AngleStructureReport {
    bool valid = false;
    std::string reason;
    std::vector<int> witness_faces;  // offending dual cycle, if any
};
AngleStructureReport validate_angle_structure(const Surface& S, const AngleStructure& A,
                                              int max_cycle_len = 12, bool check_cycles = true);

}  // namespace crpat
