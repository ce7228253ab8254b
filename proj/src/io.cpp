#include "crpat/io.h"

#include <istream>

namespace crpat {

namespace {

Json complex_to_json(Complex z) { return Json::array({std::real(z), std::imag(z)}); }

Complex complex_from_json(const Json& j) {
    if (!j.is_array() || j.size() != 2)
        throw validation_error("expected a [re, im] pair");
    return Complex(j[0].get<double>(), j[1].get<double>());
}

// Per edge values are keyed by the decimal edge id.
template <class T, class Get>
std::vector<T> edge_table_from_json(const Json& j, int num_edges, const Get& get) {
    if (!j.is_object()) throw validation_error("expected an object keyed by edge id");
    std::vector<T> out(num_edges);
    std::vector<char> seen(num_edges, 0);
    for (auto& [key, val] : j.items()) {
        int e = -1;
        try {
            e = std::stoi(key);
        } catch (const std::exception&) {
            throw validation_error("bad edge key " + key);
        }
        if (e < 0 || e >= num_edges) throw validation_error("edge id out of range: " + key);
        out[e] = get(val);
        seen[e] = 1;
    }
    for (int e = 0; e < num_edges; ++e)
        if (!seen[e]) throw validation_error("missing edge " + std::to_string(e));
    return out;
}

Json moebius_to_json(const MoebiusMap& m) {
    return Json{{"a", complex_to_json(m.a)},
                {"b", complex_to_json(m.b)},
                {"c", complex_to_json(m.c)},
                {"d", complex_to_json(m.d)}};
}

const char* type_name(HolonomyType t) {
    switch (t) {
        case HolonomyType::Identity: return "identity";
        case HolonomyType::TypeI: return "I";
        case HolonomyType::TypeII: return "II";
        default: return "III";
    }
}

}  // namespace

Json mesh_to_json(const Surface& S) {
    Json faces = Json::array();
    for (auto& f : S.faces) faces.push_back(Json::array({f[0], f[1], f[2]}));
    Json j{{"genus", S.genus}, {"faces", faces}};
    if (S.genus == 1) {
        Json labels = Json::object();
        for (int h = 0; h < S.num_halfedges(); ++h)
            labels[std::to_string(h)] = Json::array({S.deck[h][0], S.deck[h][1]});
        j["deck_labels"] = labels;
    }
    return j;
}

Surface mesh_from_json(const Json& j) {
    try {
        int genus = j.at("genus").get<int>();
        std::vector<std::array<int, 3>> faces;
        for (auto& f : j.at("faces")) {
            if (!f.is_array() || f.size() != 3)
                throw validation_error("faces must be triples");
            faces.push_back({f[0].get<int>(), f[1].get<int>(), f[2].get<int>()});
        }
        std::map<int, DeckWord> labels;
        if (j.contains("deck_labels"))
            for (auto& [key, val] : j.at("deck_labels").items())
                labels[std::stoi(key)] = DeckWord{val.at(0).get<int>(), val.at(1).get<int>()};
        return build_surface(faces, genus, labels);
    } catch (const Json::exception& e) {
        throw validation_error(std::string("malformed mesh: ") + e.what());
    }
}

Json cr_to_json(const CrossRatioSystem& X) {
    Json j = Json::object();
    for (size_t e = 0; e < X.cr.size(); ++e)
        j[std::to_string(e)] = complex_to_json(X.cr[e]);
    return j;
}

CrossRatioSystem cr_from_json(const Json& j, int num_edges) {
    return CrossRatioSystem{
        edge_table_from_json<Complex>(j, num_edges, complex_from_json)};
}

Json theta_to_json(const AngleStructure& A) {
    Json j = Json::object();
    for (size_t e = 0; e < A.theta.size(); ++e) j[std::to_string(e)] = A.theta[e];
    return j;
}

AngleStructure theta_from_json(const Json& j, int num_edges) {
    return AngleStructure{edge_table_from_json<double>(
        j, num_edges, [](const Json& v) { return v.get<double>(); })};
}

Json q_to_json(const std::vector<double>& q) {
    Json j = Json::object();
    for (size_t e = 0; e < q.size(); ++e) j[std::to_string(e)] = q[e];
    return j;
}

std::vector<double> q_from_json(const Json& j, int num_edges) {
    return edge_table_from_json<double>(j, num_edges,
                                        [](const Json& v) { return v.get<double>(); });
}

Json positions_to_json(const std::map<Lift, ExtComplex>& pos) {
    Json arr = Json::array();
    for (auto& [l, z] : pos) {
        Json item{{"v", l.v}, {"m", l.w[0]}, {"n", l.w[1]}};
        if (z.is_inf())
            item["inf"] = true;
        else {
            item["re"] = std::real(z.z);
            item["im"] = std::imag(z.z);
        }
        arr.push_back(item);
    }
    return arr;
}

Json positions_to_json(const DevelopingMap& dev) {
    std::map<Lift, ExtComplex> sorted(dev.pos.begin(), dev.pos.end());
    return positions_to_json(sorted);
}

std::map<Lift, ExtComplex> positions_from_json(const Json& j) {
    try {
        std::map<Lift, ExtComplex> out;
        for (auto& item : j) {
            Lift l{item.at("v").get<int>(),
                   {item.value("m", 0), item.value("n", 0)}};
            if (item.value("inf", false))
                out[l] = ExtComplex::infinity();
            else
                out[l] = ExtComplex(item.at("re").get<double>(), item.at("im").get<double>());
        }
        return out;
    } catch (const Json::exception& e) {
        throw validation_error(std::string("malformed positions: ") + e.what());
    }
}

Json bundle_to_json(const FixtureBundle& B) {
    Json j{{"version", 1}, {"mesh", mesh_to_json(B.surface)}};
    if (B.cr) j["cr"] = cr_to_json(*B.cr);
    if (B.theta) j["theta"] = theta_to_json(*B.theta);
    if (!B.positions.empty()) j["positions"] = positions_to_json(B.positions);
    if (!B.q.empty()) j["q"] = q_to_json(B.q);
    return j;
}

FixtureBundle bundle_from_json(const Json& j) {
    try {
        if (!j.is_object() || !j.contains("version"))
            throw validation_error("document lacks a version field");
        if (j.at("version").get<int>() != 1)
            throw validation_error("unsupported document version");
        FixtureBundle B;
        B.surface = mesh_from_json(j.at("mesh"));
        if (j.contains("cr")) B.cr = cr_from_json(j.at("cr"), B.surface.num_edges);
        if (j.contains("theta"))
            B.theta = theta_from_json(j.at("theta"), B.surface.num_edges);
        if (j.contains("positions")) B.positions = positions_from_json(j.at("positions"));
        if (j.contains("q")) B.q = q_from_json(j.at("q"), B.surface.num_edges);
        return B;
    } catch (const Json::exception& e) {
        throw validation_error(std::string("malformed bundle: ") + e.what());
    }
}

Json holonomy_to_json(const HolonomyMaps& H, const HolonomyClassification& cls) {
    Json fixed = Json::array();
    for (auto& p : cls.fixed)
        fixed.push_back(p.is_inf() ? Json("inf") : complex_to_json(p.z));
    return Json{{"rho1", moebius_to_json(H.rho1)},
                {"rho2", moebius_to_json(H.rho2)},
                {"max_pair_error", H.max_pair_error},
                {"type", type_name(cls.type)},
                {"alpha", Json::array({complex_to_json(cls.alpha[0]),
                                       complex_to_json(cls.alpha[1])})},
                {"beta", Json::array({complex_to_json(cls.beta[0]),
                                      complex_to_json(cls.beta[1])})},
                {"fixed", fixed},
                {"commutator_error", cls.commutator_error}};
}

Json modulus_to_json(const ModulusReport& M) {
    return Json{{"h1", complex_to_json(M.h1)},   {"h2", complex_to_json(M.h2)},
                {"c", complex_to_json(M.c)},     {"tau", complex_to_json(M.tau)},
                {"euclidean", M.euclidean},      {"swapped", M.swapped},
                {"branch_warning", M.branch_warning}, {"residual", M.residual}};
}

Json family_point_to_json(const AffineFamilyPoint& P) {
    Json X = Json::array();
    for (int e = 0; e < P.X.size(); ++e) X.push_back(P.X(e));
    return Json{{"A", Json::array({P.A1, P.A2})},
                {"X", X},
                {"iterations", P.iterations},
                {"residual", P.residual},
                {"type", type_name(P.cls.type)},
                {"modulus", modulus_to_json(P.modulus)}};
}

Json kernel_to_json(const KernelReal& K) {
    Json basis = Json::array();
    for (int c = 0; c < K.basis.cols(); ++c) {
        Json col = Json::array();
        for (int r = 0; r < K.basis.rows(); ++r) col.push_back(K.basis(r, c));
        basis.push_back(col);
    }
    Json j{{"dim", K.dim}, {"svals", K.svals}, {"basis", basis}};
    if (std::isfinite(K.gap)) j["gap"] = K.gap;
    return j;
}

Json kernel_to_json(const KernelComplex& K) {
    Json basis = Json::array();
    for (int c = 0; c < K.basis.cols(); ++c) {
        Json col = Json::array();
        for (int r = 0; r < K.basis.rows(); ++r) col.push_back(complex_to_json(K.basis(r, c)));
        basis.push_back(col);
    }
    Json j{{"dim", K.dim}, {"svals", K.svals}, {"basis", basis}};
    if (std::isfinite(K.gap)) j["gap"] = K.gap;
    return j;
}

Json scan_to_json(const ScanResult& R) {
    Json pts = Json::array();
    for (size_t i = 0; i < R.tau.size(); ++i)
        pts.push_back(Json{{"A", Json::array({R.A1[i], R.A2[i]})},
                           {"tau", complex_to_json(R.tau[i])},
                           {"jac_det", R.jac_det[i]}});
    Json dup = Json::array();
    for (auto& [p, q] : R.extra_duplicates) dup.push_back(Json::array({p, q}));
    return Json{{"n", R.n},
                {"range", R.range},
                {"points", pts},
                {"extra_duplicates", dup},
                {"min_nonzero_det", R.min_nonzero_det}};
}

Json rigidity_to_json(const RigidityReport& R) {
    return Json{{"trials", R.trials},
                {"max_cr_deviation", R.max_cr_deviation},
                {"max_radius_ratio_deviation", R.max_radius_ratio_deviation},
                {"residuals", R.residuals},
                {"consistent", R.consistent}};
}

Json read_json(std::istream& in) {
    try {
        return Json::parse(in);
    } catch (const Json::exception& e) {
        throw validation_error(std::string("malformed JSON input: ") + e.what());
    }
}

}  // namespace crpat
