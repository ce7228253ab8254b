#pragma once
// Built in example surfaces and patterns used by the command line tool and
// the test suite.

#include <map>
#include <optional>
#include <string>

#include "crpat/crsys.h"

namespace crpat {

struct FixtureBundle {
    Surface surface;
    std::optional<CrossRatioSystem> cr;
    std::optional<AngleStructure> theta;
    std::map<Lift, ExtComplex> positions;  // lifts with known planar positions
    std::vector<double> q;                 // per edge quadratic differential
};

// One vertex torus, all three cross ratios exp(i pi / 3).
FixtureBundle one_vertex_torus_a();

// One vertex torus with cross ratios b, -(b + 1) / b, -1 / (1 + b).
FixtureBundle one_vertex_torus_b(Complex b);

// Hexagonal m by n torus with the equilateral pattern and its angles.
FixtureBundle regular_torus_fixture(int m, int n);

// One vertex torus, all cross ratios exp(2 pi i / 3); valid but branched.
FixtureBundle doubled_argument_torus();

// Squares and octagons on the 2 by 2 grid torus, vertices on the unit grid.
FixtureBundle four_eight_lattice();

// Jessen orthogonal icosahedron projected to the plane, carrying the
// quadratic differential supported on its edge graph.
FixtureBundle jessen();

// Regular icosahedron with every intersection angle 2 pi / 5.
FixtureBundle icosahedron_sphere();

// Command line spelling, e.g. {"regular-torus", "2", "2"}.
FixtureBundle fixture_by_name(const std::vector<std::string>& args);

}  // namespace crpat
