#include "crpat/render.h"

#include <algorithm>
#include <cstdio>
#include <set>

namespace crpat {

namespace {

std::string num(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", x);
    return buf;
}

struct PlacedFace {
    int f;
    DeckWord w;
    std::array<Complex, 3> z;
};

}  // namespace

std::string render_svg(const Surface& S, const std::map<Lift, ExtComplex>& pos,
                       const RenderOptions& opt) {
    if (pos.empty()) throw validation_error("nothing to render, no positions given");

    std::set<DeckWord> words(opt.words.begin(), opt.words.end());
    if (words.empty())
        for (auto& [l, z] : pos) words.insert(l.w);

    std::vector<PlacedFace> placed;
    for (int f = 0; f < S.num_faces(); ++f)
        for (const DeckWord& w : words) {
            PlacedFace pf{f, w, {}};
            bool ok = true;
            for (int t = 0; t < 3 && ok; ++t) {
                auto it = pos.find(Lift{S.faces[f][t], word_add(w, S.corner_off[f][t])});
                if (it == pos.end() || it->second.is_inf())
                    ok = false;
                else
                    pf.z[t] = it->second.z;
            }
            if (ok) placed.push_back(pf);
        }
    if (placed.empty()) throw validation_error("no face has all corners placed");

    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (auto& [l, z] : pos) {
        if (z.is_inf()) continue;
        xmin = std::min(xmin, std::real(z.z));
        xmax = std::max(xmax, std::real(z.z));
        ymin = std::min(ymin, std::imag(z.z));
        ymax = std::max(ymax, std::imag(z.z));
    }
    double ext = std::max(xmax - xmin, ymax - ymin);
    if (ext <= 0.0) ext = 1.0;
    double mg = opt.margin * ext;
    double stroke = 0.004 * ext;

    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" + num(xmin - mg) + " " +
           num(-(ymax + mg)) + " " + num(xmax - xmin + 2 * mg) + " " +
           num(ymax - ymin + 2 * mg) + "\">\n";

    for (auto& pf : placed)
        for (int t = 0; t < 3; ++t) {
            Complex a = pf.z[t], b = pf.z[(t + 1) % 3];
            out += "<line x1=\"" + num(std::real(a)) + "\" y1=\"" + num(-std::imag(a)) +
                   "\" x2=\"" + num(std::real(b)) + "\" y2=\"" + num(-std::imag(b)) +
                   "\" stroke=\"#333333\" stroke-width=\"" + num(stroke) + "\"/>\n";
        }

    if (opt.circles)
        for (auto& pf : placed) {
            Circumcircle cc = circumcircle(pf.z[0], pf.z[1], pf.z[2]);
            if (cc.is_line) continue;
            out += "<circle cx=\"" + num(std::real(cc.center)) + "\" cy=\"" +
                   num(-std::imag(cc.center)) + "\" r=\"" + num(cc.radius) +
                   "\" fill=\"none\" stroke=\"#0077cc\" stroke-width=\"" + num(stroke) +
                   "\"/>\n";
        }

    for (auto& [l, z] : pos) {
        if (z.is_inf()) continue;
        out += "<ellipse cx=\"" + num(std::real(z.z)) + "\" cy=\"" + num(-std::imag(z.z)) +
               "\" rx=\"" + num(2.0 * stroke) + "\" ry=\"" + num(2.0 * stroke) +
               "\" fill=\"#000000\"/>\n";
    }

    out += "</svg>\n";
    return out;
}

}  // namespace crpat
