#include "crpat/fixtures.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <set>

namespace crpat {

namespace {

std::function<ExtComplex(Lift)> map_lookup(const std::map<Lift, ExtComplex>& pos) {
    return [&pos](Lift l) {
        auto it = pos.find(l);
        if (it == pos.end()) throw validation_error("position missing for a lift");
        return it->second;
    };
}

}  // namespace

FixtureBundle one_vertex_torus_a() {
    FixtureBundle B;
    B.surface = regular_torus(1, 1);
    Complex w = std::polar(1.0, kPi / 3.0);
    B.cr = CrossRatioSystem{{w, w, w}};
    B.theta = AngleStructure{std::vector<double>(3, kPi / 3.0)};
    return B;
}

FixtureBundle one_vertex_torus_b(Complex b) {
    if (std::abs(b) < 1e-12 || std::abs(b + 1.0) < 1e-12)
        throw validation_error("parameter b must avoid 0 and -1");
    FixtureBundle B;
    B.surface = regular_torus(1, 1);
    B.cr = CrossRatioSystem{{b, -(b + 1.0) / b, -1.0 / (1.0 + b)}};
    return B;
}

FixtureBundle regular_torus_fixture(int m, int n) {
    FixtureBundle B;
    B.surface = regular_torus(m, n);
    Complex w = std::polar(1.0, kPi / 3.0);
    B.cr = CrossRatioSystem{std::vector<Complex>(B.surface.num_edges, w)};
    B.theta = AngleStructure{std::vector<double>(B.surface.num_edges, kPi / 3.0)};
    return B;
}

FixtureBundle doubled_argument_torus() {
    FixtureBundle B;
    B.surface = regular_torus(1, 1);
    Complex w = std::polar(1.0, 2.0 * kPi / 3.0);
    B.cr = CrossRatioSystem{{w, w, w}};
    return B;
}

FixtureBundle four_eight_lattice() {
    FixtureBundle B;
    B.surface = regular_torus(2, 2);
    for (int v = 0; v < 4; ++v)
        for (int m = -2; m <= 2; ++m)
            for (int n = -2; n <= 2; ++n) {
                double x = v % 2 + 2.0 * m;
                double y = v / 2 + 2.0 * n;
                B.positions[Lift{v, {m, n}}] = ExtComplex(x, y);
            }
    B.cr = extract_cross_ratios(B.surface, map_lookup(B.positions));
    return B;
}

FixtureBundle jessen() {
    // vertex coordinates on the sphere of radius sqrt(5)
    const double P[12][3] = {
        {1, -2, 0},  {-1, -2, 0}, {2, 0, 1},  {2, 0, -1}, {0, -1, 2},  {0, 1, 2},
        {-2, 0, 1},  {-2, 0, -1}, {1, 2, 0},  {-1, 2, 0}, {0, -1, -2}, {0, 1, -2}};
    enum { A, E, D, H, B, I, F, G, bA, bE, C, bI };
    // outward oriented faces; stored reversed so the projected plane faces
    // are counterclockwise
    const int T[20][3] = {
        {A, D, B},   {A, bA, D},  {A, H, bA},  {A, C, H},   {A, B, C},
        {E, B, F},   {E, C, B},   {E, F, bE},  {E, bE, G},  {E, G, C},
        {D, F, B},   {D, I, F},   {D, bA, I},  {H, C, G},   {H, G, bI},
        {H, bI, bA}, {I, bE, F},  {I, bA, bI}, {I, bI, bE}, {G, bE, bI}};
    std::vector<std::array<int, 3>> faces;
    for (auto& t : T) faces.push_back({t[2], t[1], t[0]});

    FixtureBundle Bu;
    Bu.surface = build_surface(faces, 0);
    const std::array<double, 3> pole{0.0, 0.0, std::sqrt(5.0)};
    for (int v = 0; v < 12; ++v)
        Bu.positions[Lift{v, {0, 0}}] =
            stereographic({P[v][0], P[v][1], P[v][2]}, pole);
    Bu.cr = extract_cross_ratios(Bu.surface, map_lookup(Bu.positions));

    const std::set<std::pair<int, int>> long_edges{{A, bA}, {E, bE}, {D, F},
                                                  {H, G},  {B, C},  {I, bI}};
    Bu.q.assign(Bu.surface.num_edges, 1.0);
    for (int e = 0; e < Bu.surface.num_edges; ++e) {
        int h = Bu.surface.edge_rep[e];
        int a = Bu.surface.origin(h), b = Bu.surface.dest(h);
        if (long_edges.count({std::min(a, b), std::max(a, b)})) Bu.q[e] = -4.0;
    }
    return Bu;
}

FixtureBundle icosahedron_sphere() {
    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    std::vector<std::array<double, 3>> pts;
    for (int axis = 0; axis < 3; ++axis)
        for (double s1 : {1.0, -1.0})
            for (double s2 : {1.0, -1.0}) {
                std::array<double, 3> p{0.0, 0.0, 0.0};
                p[(axis + 1) % 3] = s1;
                p[(axis + 2) % 3] = s2 * phi;
                pts.push_back(p);
            }

    auto dist2 = [&](int a, int b) {
        double s = 0.0;
        for (int k = 0; k < 3; ++k) s += (pts[a][k] - pts[b][k]) * (pts[a][k] - pts[b][k]);
        return s;
    };
    std::vector<std::array<int, 3>> faces;
    for (int a = 0; a < 12; ++a)
        for (int b = a + 1; b < 12; ++b)
            for (int c = b + 1; c < 12; ++c) {
                if (std::abs(dist2(a, b) - 4.0) > 1e-9 ||
                    std::abs(dist2(a, c) - 4.0) > 1e-9 ||
                    std::abs(dist2(b, c) - 4.0) > 1e-9)
                    continue;
                double u[3], v[3], nrm[3], cen[3];
                for (int k = 0; k < 3; ++k) {
                    u[k] = pts[b][k] - pts[a][k];
                    v[k] = pts[c][k] - pts[a][k];
                    cen[k] = pts[a][k] + pts[b][k] + pts[c][k];
                }
                nrm[0] = u[1] * v[2] - u[2] * v[1];
                nrm[1] = u[2] * v[0] - u[0] * v[2];
                nrm[2] = u[0] * v[1] - u[1] * v[0];
                double dot = nrm[0] * cen[0] + nrm[1] * cen[1] + nrm[2] * cen[2];
                faces.push_back(dot > 0 ? std::array<int, 3>{a, b, c}
                                        : std::array<int, 3>{a, c, b});
            }
    std::sort(faces.begin(), faces.end());

    FixtureBundle B;
    B.surface = build_surface(faces, 0);
    B.theta = AngleStructure{std::vector<double>(B.surface.num_edges, 2.0 * kPi / 5.0)};
    return B;
}

FixtureBundle fixture_by_name(const std::vector<std::string>& args) {
    if (args.empty()) throw validation_error("missing fixture name");
    const std::string& name = args[0];
    auto want = [&](size_t n) {
        if (args.size() != n + 1)
            throw validation_error("fixture " + name + " expects " + std::to_string(n) +
                                   " arguments");
    };
    if (name == "one-vertex-torus-a") {
        want(0);
        return one_vertex_torus_a();
    }
    if (name == "one-vertex-torus-b") {
        want(1);
        char* end = nullptr;
        double b = std::strtod(args[1].c_str(), &end);
        if (end == args[1].c_str() || *end != '\0')
            throw validation_error("fixture parameter b must be a real number");
        return one_vertex_torus_b(Complex(b, 0.0));
    }
    if (name == "regular-torus") {
        want(2);
        int m = std::atoi(args[1].c_str()), n = std::atoi(args[2].c_str());
        if (m < 1 || n < 1) throw validation_error("grid sides must be positive");
        return regular_torus_fixture(m, n);
    }
    if (name == "jessen") {
        want(0);
        return jessen();
    }
    if (name == "icosahedron-sphere") {
        want(0);
        return icosahedron_sphere();
    }
    throw validation_error("unknown fixture " + name);
}

}  // namespace crpat
