#include "slcr/phi.hpp"

#include <cmath>
#include <complex>
#include <fstream>
#include <sstream>
#include <variant>
#include <vector>

#include "slcr/error.hpp"
#include "slcr/explicit.hpp"

namespace slcr {

namespace {

bool starts_with(const std::string& s, const std::string& p) { return s.rfind(p, 0) == 0; }

int parse_order(const std::string& s, const std::string& name) {
    try {
        std::size_t used = 0;
        int k = std::stoi(s, &used);
        if (used == s.size() && k >= 0) return k;
    } catch (const std::exception&) {
    }
    throw Error("invalid-phi", "bad order in '" + name + "'");
}

double shape_radius(const GridDomain& g) {
    if (const auto* d = std::get_if<Disc>(&g.shape())) return d->r;
    const auto& r = std::get<Rectangle>(g.shape());
    return 0.5 * std::hypot(r.x1 - r.x0, r.y1 - r.y0);
}

}  // namespace

BoundaryFunction make_phi(const GridPtr& g, const std::string& name, PhiTarget target, double a) {
    if (starts_with(name, "affine")) {
        double c[3] = {1.0, 0.5, 0.25};
        if (name.size() > 6) {
            if (name[6] != ':') throw Error("invalid-phi", "expected affine:alpha,beta,gamma");
            std::stringstream ss(name.substr(7));
            std::string tok;
            for (int k = 0; k < 3; ++k) {
                if (!std::getline(ss, tok, ',')) throw Error("invalid-phi", "affine needs three coefficients");
                c[k] = std::stod(tok);
            }
        }
        double al = c[0], be = c[1], ga = c[2];
        if (target == PhiTarget::v) return BoundaryFunction::from_xy(g, [=](double, double y) { return al * y + ga; });
        return BoundaryFunction::from_xy(g, [=](double x, double y) { return al * x * y + be * y + ga * x; });
    }
    if (name == "hl") {
        if (target == PhiTarget::v)
            return BoundaryFunction::from_xy(g, [=](double x, double y) { return harvey_lawson_eval(a, x, y).second; });
        return BoundaryFunction::from_xy(g, [=](double x, double y) { return harvey_lawson_potential(a, x, y); });
    }
    if (starts_with(name, "harmonic-")) {
        int k = parse_order(name.substr(9), name);
        auto [cx, cy] = g->center();
        double R = shape_radius(*g);
        return BoundaryFunction::from_xy(g, [=](double x, double y) {
            return std::pow(std::complex<double>((x - cx) / R, (y - cy) / R), k).real();
        });
    }
    if (starts_with(name, "cos-")) {
        int k = parse_order(name.substr(4), name);
        auto [cx, cy] = g->center();
        return BoundaryFunction::from_xy(g, [=](double x, double y) { return std::cos(k * std::atan2(y - cy, x - cx)); });
    }
    if (starts_with(name, "const:")) {
        double c = std::stod(name.substr(6));
        return BoundaryFunction::from_theta(g, [=](double) { return c; });
    }
    return load_phi_csv(g, name);
}

BoundaryFunction load_phi_csv(const GridPtr& g, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("invalid-phi", "unknown phi name and no such file: " + path);
    BoundaryFunction b{g, {}};
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::string last = line.substr(line.find_last_of(',') == std::string::npos ? 0 : line.find_last_of(',') + 1);
        char* end = nullptr;
        double v = std::strtod(last.c_str(), &end);
        bool numeric = end != last.c_str();
        if (!numeric) {
            if (first) {
                first = false;
                continue;
            }
            throw Error("invalid-phi", "non-numeric value in " + path);
        }
        first = false;
        b.samples.push_back(v);
    }
    if (b.samples.size() != g->loop().size())
        throw Error("invalid-phi", path + " has " + std::to_string(b.samples.size()) + " samples, the loop has " +
                                       std::to_string(g->loop().size()));
    return b;
}

BoundaryFunction random_smooth_phi(const GridPtr& g, std::mt19937_64& rng, int modes, double amplitude) {
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    double c0 = U(rng);
    std::vector<double> c(modes + 1), s(modes + 1);
    for (int k = 1; k <= modes; ++k) {
        c[k] = U(rng);
        s[k] = U(rng);
    }
    auto [cx, cy] = g->center();
    return BoundaryFunction::from_xy(g, [&](double x, double y) {
        double t = std::atan2(y - cy, x - cx);
        double acc = c0;
        for (int k = 1; k <= modes; ++k) acc += amplitude * (c[k] * std::cos(k * t) + s[k] * std::sin(k * t)) / (k * k);
        return acc;
    });
}

}  // namespace slcr
