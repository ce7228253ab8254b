#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "crpat/develop.h"
#include "crpat/fixtures.h"
#include "crpat/io.h"
#include "crpat/render.h"
#include "crpat/solver.h"

namespace crpat {

namespace {

double to_double(const std::string& s) {
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0') throw validation_error("bad number: " + s);
    return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    size_t start = 0;
    while (true) {
        size_t p = s.find(sep, start);
        if (p == std::string::npos) {
            out.push_back(s.substr(start));
            return out;
        }
        out.push_back(s.substr(start, p - start));
        start = p + 1;
    }
}

// Accepts "inf", "1.5", "2i", "-i", "0.5+0.866i" and the like.
ExtComplex parse_complex(const std::string& tok) {
    std::string s = tok;
    if (s == "inf") return ExtComplex::infinity();
    if (s.empty()) throw validation_error("empty complex literal");
    if (s.back() != 'i') return ExtComplex(to_double(s), 0.0);
    s.pop_back();
    size_t pos = std::string::npos;
    for (size_t k = s.size(); k-- > 1;)
        if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
            pos = k;
            break;
        }
    auto unit = [](const std::string& b) {
        if (b.empty() || b == "+") return 1.0;
        if (b == "-") return -1.0;
        return to_double(b);
    };
    if (pos == std::string::npos) return ExtComplex(0.0, unit(s));
    return ExtComplex(to_double(s.substr(0, pos)), unit(s.substr(pos)));
}

std::pair<double, double> parse_pair(const std::string& s) {
    auto parts = split(s, ',');
    if (parts.size() != 2) throw validation_error("expected two comma separated numbers");
    return {to_double(parts[0]), to_double(parts[1])};
}

PatchRange parse_patch(const std::string& s) {
    auto parts = split(s, ',');
    if (parts.size() != 2) throw validation_error("patch must look like m0:m1,n0:n1");
    auto ms = split(parts[0], ':'), ns = split(parts[1], ':');
    if (ms.size() != 2 || ns.size() != 2)
        throw validation_error("patch must look like m0:m1,n0:n1");
    PatchRange r{int(to_double(ms[0])), int(to_double(ms[1])), int(to_double(ns[0])),
                 int(to_double(ns[1]))};
    if (r.m1 < r.m0 || r.n1 < r.n0) throw validation_error("empty patch range");
    return r;
}

Json input_doc(const std::string& in_path) {
    if (in_path.empty() || in_path == "-") return read_json(std::cin);
    std::ifstream f(in_path);
    if (!f) throw validation_error("cannot open " + in_path);
    return read_json(f);
}

void write_text(const std::string& out_path, const std::string& text) {
    if (out_path.empty() || out_path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw validation_error("cannot open " + out_path);
    f << text;
}

void write_doc(const std::string& out_path, const Json& j) {
    write_text(out_path, j.dump(2) + "\n");
}

const CrossRatioSystem& need_cr(const FixtureBundle& B) {
    if (!B.cr) throw validation_error("input bundle has no cr section");
    return *B.cr;
}

const AngleStructure& need_theta(const FixtureBundle& B) {
    if (!B.theta) throw validation_error("input bundle has no theta section");
    return *B.theta;
}

int run_verify(const std::string& in, const std::string& out) {
    Json doc = input_doc(in);
    FixtureBundle B = bundle_from_json(doc);
    const CrossRatioSystem& cr = need_cr(B);
    const Surface& S = B.surface;

    auto phi = phi_residual(S, cr);
    double tol = default_tol();
    bool valid = phi.max_abs() <= tol;
    Json rep{{"max_residual", phi.max_abs()}, {"valid", valid}, {"tol", tol}};
    std::string why;
    bool ok = valid;
    if (!valid) why = "closing conditions violated";
    if (valid) {
        auto del = is_delaunay(S, cr);
        rep["delaunay"] = del.delaunay;
        if (!del.delaunay) {
            rep["delaunay_reason"] = del.reason;
            ok = false;
            why = "not Delaunay: " + del.reason;
        }
        Json ram = Json::array();
        for (int v = 0; v < S.num_vertices; ++v) {
            int s = ramification_order(S, cr, v, 1e-8);
            ram.push_back(s);
            if (s != 1 && ok) {
                ok = false;
                why = "branched at vertex " + std::to_string(v);
            }
        }
        rep["ramification"] = ram;
    }
    rep["ok"] = ok;
    doc["verify"] = rep;
    write_doc(out, doc);
    if (!ok) {
        std::cerr << "verification failed: " << why << "\n";
        return 1;
    }
    return 0;
}

int run_develop(const std::string& in, const std::string& out, const std::string& patch,
                const std::string& seed, const std::string& order, double tol) {
    Json doc = input_doc(in);
    FixtureBundle B = bundle_from_json(doc);
    DevelopOptions opt;
    opt.range = parse_patch(patch);
    opt.conflict_tol = tol;
    if (!seed.empty()) {
        auto toks = split(seed, ',');
        if (toks.size() != 3) throw validation_error("seed needs three complex numbers");
        for (int k = 0; k < 3; ++k) opt.seed[k] = parse_complex(toks[k]);
    }
    if (order == "dfs")
        opt.order = TraversalOrder::DepthFirst;
    else if (order != "bfs")
        throw validation_error("order must be bfs or dfs");

    DevelopingMap dev = develop(B.surface, need_cr(B), opt);
    doc["positions"] = positions_to_json(dev);
    doc["develop"] = Json{{"range", Json::array({opt.range.m0, opt.range.m1, opt.range.n0,
                                                 opt.range.n1})},
                          {"seed_face", dev.seed_face},
                          {"max_conflict", dev.max_conflict}};
    write_doc(out, doc);
    return 0;
}

int run_hqd(const std::string& in, const std::string& out, const std::string& form,
            const std::string& field) {
    Json doc = input_doc(in);
    FixtureBundle B = bundle_from_json(doc);
    const Surface& S = B.surface;
    const CrossRatioSystem& cr = need_cr(B);

    Json rep{{"form", form}, {"field", field}};
    Eigen::MatrixXd M;
    bool have_real = false;
    if (form == "cr") {
        if (field == "complex") {
            auto K = kernel_complex(assemble_cr_form_complex(S, cr));
            rep.update(kernel_to_json(K));
        } else if (field == "real") {
            M = assemble_cr_form_real(S, cr);
            have_real = true;
        } else {
            throw validation_error("field must be real or complex");
        }
    } else if (form == "z") {
        if (field != "real") throw validation_error("the z form is a real linearization");
        DevelopingMap dev;
        if (!B.positions.empty()) {
            dev.pos.insert(B.positions.begin(), B.positions.end());
        } else {
            DevelopOptions dopt;
            dopt.range = PatchRange{-2, 2, -2, 2};
            dev = develop(S, cr, dopt);
        }
        M = assemble_z_form(S, dev);
        have_real = true;
    } else {
        throw validation_error("form must be cr or z");
    }

    if (have_real) {
        auto K = kernel_real(M);
        rep.update(kernel_to_json(K));
        if (!B.q.empty()) {
            Eigen::VectorXd qv(S.num_edges);
            for (int e = 0; e < S.num_edges; ++e) qv(e) = B.q[e];
            rep["q_residual"] = (M * qv).lpNorm<Eigen::Infinity>();
            Eigen::VectorXd proj = qv - K.basis * (K.basis.transpose() * qv);
            rep["q_projection_residual"] = proj.lpNorm<Eigen::Infinity>();
        }
    }
    doc["hqd"] = rep;
    write_doc(out, doc);
    return 0;
}

int run_solve(const std::string& in, const std::string& out, const std::string& A) {
    Json doc = input_doc(in);
    FixtureBundle B = bundle_from_json(doc);
    const AngleStructure& Th = need_theta(B);
    if (B.surface.genus == 1) {
        auto [A1, A2] = parse_pair(A);
        AffineFamilyPoint P = solve_pattern(B.surface, Th, A1, A2);
        doc["cr"] = cr_to_json(P.cr);
        doc["positions"] = positions_to_json(P.dev);
        doc["develop"] = Json{{"range", Json::array({-1, 2, -1, 2})}};
        doc["family_point"] = family_point_to_json(P);
        doc["holonomy"] = holonomy_to_json(P.hol, P.cls);
        doc["modulus"] = modulus_to_json(P.modulus);
    } else {
        SphereSolveResult R = solve_sphere_pattern(B.surface, Th);
        doc["cr"] = cr_to_json(R.cr);
        doc["solve"] = Json{{"iterations", R.iterations}, {"residual", R.residual}};
        DevelopingMap dev = develop(B.surface, R.cr);
        doc["positions"] = positions_to_json(dev);
    }
    write_doc(out, doc);
    return 0;
}

int run_scan(const std::string& in, const std::string& out, int grid, double range) {
    Json doc = input_doc(in);
    FixtureBundle B = bundle_from_json(doc);
    if (B.surface.genus != 1) throw validation_error("scan expects a torus");
    ScanResult R = covering_scan(B.surface, need_theta(B), grid, range);
    doc["scan"] = scan_to_json(R);
    write_doc(out, doc);
    return 0;
}

int run_rigidity(const std::string& in, const std::string& out, const std::string& A,
                 int trials, unsigned seed) {
    Json doc = input_doc(in);
    FixtureBundle B = bundle_from_json(doc);
    if (B.surface.genus != 1) throw validation_error("rigidity expects a torus");
    auto [A1, A2] = parse_pair(A);
    RigidityReport R = rigidity_check(B.surface, need_theta(B), A1, A2, trials, seed);
    doc["rigidity"] = rigidity_to_json(R);
    write_doc(out, doc);
    return 0;
}

int run_render(const std::string& in, const std::string& out, const std::string& circles) {
    Json doc = input_doc(in);
    FixtureBundle B = bundle_from_json(doc);
    if (B.positions.empty()) throw validation_error("input bundle has no positions");
    RenderOptions opt;
    if (circles == "off")
        opt.circles = false;
    else if (circles != "on")
        throw validation_error("circles must be on or off");
    if (doc.contains("develop") && doc["develop"].contains("range")) {
        auto& r = doc["develop"]["range"];
        for (int m = r[0].get<int>(); m <= r[1].get<int>(); ++m)
            for (int n = r[2].get<int>(); n <= r[3].get<int>(); ++n)
                opt.words.push_back(DeckWord{m, n});
    }
    write_text(out, render_svg(B.surface, B.positions, opt));
    return 0;
}

int run_fixture(const std::string& out, const std::vector<std::string>& args) {
    FixtureBundle B = fixture_by_name(args);
    write_doc(out, bundle_to_json(B));
    return 0;
}

}  // namespace
}  // namespace crpat

int main(int argc, char** argv) {
    using namespace crpat;
    CLI::App app{"cross ratio patterns on triangulated tori and spheres"};
    app.require_subcommand(1);

    std::string in_path, out_path;
    std::string patch = "0:1,0:1", seed, order = "bfs", form = "cr", field = "real";
    std::string A = "0,0", circles = "on";
    double conflict_tol = 1e-6, range = 1.0;
    int grid = 5, trials = 3;
    unsigned rng_seed = 20260822;
    std::vector<std::string> fixture_args;

    auto add_io = [&](CLI::App* c) {
        c->add_option("--in", in_path, "input file, default stdin");
        c->add_option("--out", out_path, "output file, default stdout");
    };

    auto* c_verify = app.add_subcommand("verify", "check a cross ratio system");
    add_io(c_verify);

    auto* c_dev = app.add_subcommand("develop", "lay out a pattern in the plane");
    add_io(c_dev);
    c_dev->add_option("--patch", patch, "word range m0:m1,n0:n1");
    c_dev->add_option("--seed", seed, "three seed positions a,b,c");
    c_dev->add_option("--order", order, "traversal, bfs or dfs");
    c_dev->add_option("--tol", conflict_tol, "revisit conflict tolerance");

    auto* c_hqd = app.add_subcommand("hqd", "kernel of the linearized closing conditions");
    add_io(c_hqd);
    c_hqd->add_option("--form", form, "cr or z");
    c_hqd->add_option("--field", field, "real or complex");

    auto* c_solve = app.add_subcommand("solve", "solve the pattern equations");
    add_io(c_solve);
    c_solve->add_option("--A", A, "torus family parameters a1,a2");

    auto* c_scan = app.add_subcommand("scan", "solve a grid in the parameter plane");
    add_io(c_scan);
    c_scan->add_option("--grid", grid, "points per side");
    c_scan->add_option("--range", range, "half width of the square");

    auto* c_rig = app.add_subcommand("rigidity", "re-solve from random starts");
    add_io(c_rig);
    c_rig->add_option("--A", A, "torus family parameters a1,a2");
    c_rig->add_option("--trials", trials, "number of solves");
    c_rig->add_option("--seed", rng_seed, "random seed");

    auto* c_render = app.add_subcommand("render", "draw a laid out pattern as SVG");
    add_io(c_render);
    c_render->add_option("--circles", circles, "draw circumcircles, on or off");

    auto* c_fix = app.add_subcommand("fixture", "emit a built in example");
    c_fix->add_option("--out", out_path, "output file, default stdout");
    c_fix->add_option("name", fixture_args, "fixture name and parameters");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (c_verify->parsed()) return run_verify(in_path, out_path);
        if (c_dev->parsed())
            return run_develop(in_path, out_path, patch, seed, order, conflict_tol);
        if (c_hqd->parsed()) return run_hqd(in_path, out_path, form, field);
        if (c_solve->parsed()) return run_solve(in_path, out_path, A);
        if (c_scan->parsed()) return run_scan(in_path, out_path, grid, range);
        if (c_rig->parsed()) return run_rigidity(in_path, out_path, A, trials, rng_seed);
        if (c_render->parsed()) return run_render(in_path, out_path, circles);
        if (c_fix->parsed()) return run_fixture(out_path, fixture_args);
    } catch (const validation_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const numeric_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
