#pragma once
// Deterministic SVG pictures of laid out patterns: edges, circumcircles and
// vertex dots over every fully placed face lift.

#include <map>
#include <string>
#include <vector>

#include "crpat/surface.h"
#include "crpat/moebius.h"

namespace crpat {

struct RenderOptions {
    bool circles = true;
    double margin = 0.05;  // fraction of the larger bounding box side
    // Words of the face lifts to draw; empty means every word that appears
    // among the positions.
    std::vector<DeckWord> words;
};

std::string render_svg(const Surface& S, const std::map<Lift, ExtComplex>& pos,
                       const RenderOptions& opt = {});

}  // namespace crpat
