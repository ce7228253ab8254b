#pragma once
// JSON serialization of meshes, patterns and analysis reports.

#include <iosfwd>

#include "json.hpp"

#include "crpat/fixtures.h"
#include "crpat/solver.h"

namespace crpat {

using Json = nlohmann::json;

Json mesh_to_json(const Surface& S);
Surface mesh_from_json(const Json& j);

Json cr_to_json(const CrossRatioSystem& X);
CrossRatioSystem cr_from_json(const Json& j, int num_edges);

Json theta_to_json(const AngleStructure& A);
AngleStructure theta_from_json(const Json& j, int num_edges);

Json q_to_json(const std::vector<double>& q);
std::vector<double> q_from_json(const Json& j, int num_edges);

Json positions_to_json(const std::map<Lift, ExtComplex>& pos);
Json positions_to_json(const DevelopingMap& dev);
std::map<Lift, ExtComplex> positions_from_json(const Json& j);

// A bundle document: version, mesh, and whichever optional sections are
// present. Unknown sections are preserved by readers that pass the document
// through.
Json bundle_to_json(const FixtureBundle& B);
FixtureBundle bundle_from_json(const Json& j);

Json holonomy_to_json(const HolonomyMaps& H, const HolonomyClassification& cls);
Json modulus_to_json(const ModulusReport& M);
Json family_point_to_json(const AffineFamilyPoint& P);
Json kernel_to_json(const KernelReal& K);
Json kernel_to_json(const KernelComplex& K);
Json scan_to_json(const ScanResult& R);
Json rigidity_to_json(const RigidityReport& R);

// Parses a complete document from the stream; throws validation_error on
// malformed input.
Json read_json(std::istream& in);

}  // namespace crpat
