#include "slcr/cauchy_riemann.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <sstream>

#include "slcr/error.hpp"
#include "slcr/kernels.hpp"

namespace slcr {

namespace {

constexpr std::size_t npos = GridDomain::npos;

double diameter(const GridDomain& g) {
    if (auto* d = std::get_if<Disc>(&g.shape())) return 2 * d->r;
    const auto& r = std::get<Rectangle>(g.shape());
    return std::max(r.x1 - r.x0, r.y1 - r.y0);
}

std::vector<double> tree_fill(const GridDomain& g, const ScalarField& P, const ScalarField& Q,
                              std::size_t anchor, bool rows_first) {
    const std::size_t n = g.size();
    std::vector<double> F(n, 0.0);
    std::vector<std::uint8_t> done(n, 0);
    done[anchor] = 1;
    std::size_t filled = 1;
    auto step = [&](std::size_t a, std::size_t b, bool xdir) {
        const Node& pa = g.node(a);
        const Node& pb = g.node(b);
        return xdir ? 0.5 * (P[a] + P[b]) * (pb.x - pa.x) : 0.5 * (Q[a] + Q[b]) * (pb.y - pa.y);
    };
    auto expand = [&](bool xdir) {
        std::size_t before = filled;
        std::vector<std::size_t> seeds;
        for (std::size_t k = 0; k < n; ++k)
            if (done[k]) seeds.push_back(k);
        for (std::size_t s : seeds) {
            for (Dir d : xdir ? std::array<Dir, 2>{Dir::E, Dir::W} : std::array<Dir, 2>{Dir::N, Dir::S}) {
                std::size_t cur = s;
                for (std::size_t nb = g.neighbor(cur, d); nb != npos && !done[nb]; nb = g.neighbor(cur, d)) {
                    F[nb] = F[cur] + step(cur, nb, xdir);
                    done[nb] = 1;
                    ++filled;
                    cur = nb;
                }
            }
        }
        return filled != before;
    };
    bool xdir = rows_first;
    int stale = 0;
    while (filled < n && stale < 2) {
        stale = expand(xdir) ? 0 : stale + 1;
        xdir = !xdir;
    }
    if (filled < n) throw Error("disconnected-grid", "path integration could not reach every node");
    return F;
}

int loop_winding(const std::vector<double>& px, const std::vector<double>& py, double cx, double cy) {
    double total = 0;
    const std::size_t n = px.size();
    for (std::size_t k = 0; k < n; ++k) {
        double ax = px[k] - cx, ay = py[k] - cy;
        double bx = px[(k + 1) % n] - cx, by = py[(k + 1) % n] - cy;
        total += std::atan2(ax * by - ay * bx, ax * bx + ay * by);
    }
    return static_cast<int>(std::lround(total / (2 * std::numbers::pi)));
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

nlohmann::json values_json(const ScalarField& f) {
    nlohmann::json vals = nlohmann::json::array();
    for (std::size_t n = 0; n < f.size(); ++n) {
        if (f.is_valid(n))
            vals.push_back(f.values[n]);
        else
            vals.push_back(nullptr);
    }
    return vals;
}

void values_from_json(ScalarField& f, const nlohmann::json& vals) {
    if (vals.size() != f.size()) throw Error("size-mismatch", "value count does not match the grid");
    for (std::size_t n = 0; n < f.size(); ++n) {
        if (vals[n].is_null()) {
            if (f.valid.empty()) f.valid.assign(f.size(), 1);
            f.valid[n] = 0;
            f.values[n] = std::numeric_limits<double>::quiet_NaN();
        } else {
            f.values[n] = vals[n].get<double>();
        }
    }
}

}  // namespace

SolutionPair sample_pair(GridPtr g, const AnalyticPair& p, double a) {
    SolutionPair s;
    s.u = ScalarField::zeros(g);
    s.v = ScalarField::zeros(g);
    s.a = a;
    for (std::size_t n = 0; n < g->size(); ++n) {
        auto [u, v] = p.eval(g->node(n).x, g->node(n).y);
        s.u[n] = u;
        s.v[n] = v;
    }
    return s;
}

std::pair<ScalarField, ScalarField> cr_residual(const SolutionPair& p) {
    const GridDomain& g = *p.grid();
    auto [ux, uy] = field_gradient(p.u);
    auto [vx, vy] = field_gradient(p.v);
    std::vector<double> ys(g.size());
    for (std::size_t n = 0; n < g.size(); ++n) ys[n] = g.node(n).y;
    ScalarField r1 = ScalarField::zeros(p.grid()), r2 = ScalarField::zeros(p.grid());
    kernels::active_kernels().cr_combine(ux.values.data(), uy.values.data(), vx.values.data(),
                                         vy.values.data(), p.v.values.data(), ys.data(), p.a * p.a,
                                         r1.values.data(), r2.values.data(), g.size());
    r1.valid.assign(g.size(), 0);
    r2.valid.assign(g.size(), 0);
    for (std::size_t n : g.interior()) {
        bool ok = p.u.is_valid(n) && p.v.is_valid(n);
        for (int d = 0; d < 4; ++d) {
            std::size_t nb = g.neighbor(n, static_cast<Dir>(d));
            ok = ok && p.u.is_valid(nb) && p.v.is_valid(nb);
        }
        r1.valid[n] = r2.valid[n] = ok;
    }
    for (std::size_t n = 0; n < g.size(); ++n) {
        if (!r1.valid[n]) r1.values[n] = r2.values[n] = 0.0;
    }
    return {r1, r2};
}

ScalarField integrate_form(const ScalarField& P, const ScalarField& Q, std::size_t anchor, double tol,
                           PathAudit* audit) {
    const GridDomain& g = *P.grid;
    if (anchor >= g.size()) throw Error("invalid-anchor", "anchor node out of range");
    double scale = 0;
    for (std::size_t n = 0; n < g.size(); ++n) scale = std::max({scale, std::abs(P[n]), std::abs(Q[n])});
    scale /= diameter(g);

    double worst = 0;
    for (int j = 0; j + 1 < g.ny(); ++j) {
        for (int i = 0; i + 1 < g.nx(); ++i) {
            std::size_t c00 = g.at(i, j), c10 = g.at(i + 1, j), c11 = g.at(i + 1, j + 1), c01 = g.at(i, j + 1);
            if (c00 == npos || c10 == npos || c11 == npos || c01 == npos) continue;
            // Boundary values come from one-sided differences; audit only
            // plaquettes whose data is centred.
            if (!g.is_interior(c00) || !g.is_interior(c10) || !g.is_interior(c11) || !g.is_interior(c01)) continue;
            double circ = 0.5 * (P[c00] + P[c10]) * g.hx() + 0.5 * (Q[c10] + Q[c11]) * g.hy() -
                          0.5 * (P[c01] + P[c11]) * g.hx() - 0.5 * (Q[c00] + Q[c01]) * g.hy();
            worst = std::max(worst, std::abs(circ) / g.cell_area());
        }
    }
    double defect = scale > 0 ? worst / scale : (worst > 0 ? std::numeric_limits<double>::infinity() : 0.0);

    std::vector<double> fx = tree_fill(g, P, Q, anchor, true);
    std::vector<double> fy = tree_fill(g, P, Q, anchor, false);
    ScalarField f = ScalarField::zeros(P.grid);
    double gap = 0;
    for (std::size_t n = 0; n < g.size(); ++n) {
        f[n] = 0.5 * (fx[n] + fy[n]);
        gap = std::max(gap, std::abs(fx[n] - fy[n]));
    }
    // The two trees differ by loop integrals over whole regions; measured
    // against |form| * diameter this is O(h) for solutions and O(1) otherwise.
    double rel_gap = scale > 0 ? gap / (scale * diameter(g) * diameter(g)) : (gap > 0 ? 1.0 : 0.0);
    if (audit) *audit = {defect, rel_gap};
    if (rel_gap > tol) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "relative path gap %.3g exceeds tolerance %.3g", rel_gap, tol);
        throw Error("path-dependence-exceeds-tolerance", buf);
    }
    return f;
}

ScalarField potential_from_pair(const SolutionPair& p, std::size_t anchor, double tol, PathAudit* audit) {
    return integrate_form(p.v, p.u, anchor, tol, audit);
}

SolutionPair pair_from_potential(const ScalarField& f, double a) {
    auto [fx, fy] = field_gradient(f);
    SolutionPair p;
    p.u = fy;
    p.v = fx;
    p.a = a;
    return p;
}

ScalarField u_from_v(const ScalarField& v, double a, std::size_t anchor, double tol, PathAudit* audit) {
    if (a == 0) throw Error("zero-a-rejected", "u_from_v needs a != 0");
    const GridDomain& g = *v.grid;
    auto [vx, vy] = field_gradient(v);
    std::vector<double> ys(g.size()), c(g.size());
    for (std::size_t n = 0; n < g.size(); ++n) ys[n] = g.node(n).y;
    kernels::active_kernels().ellipticity(v.values.data(), ys.data(), a * a, c.data(), g.size());
    ScalarField Q = ScalarField::zeros(v.grid);
    for (std::size_t n = 0; n < g.size(); ++n) Q[n] = -0.5 * c[n] * vx[n];
    return integrate_form(vy, Q, anchor, tol, audit);
}

SolutionPair inverse_pair(const SolutionPair& p, const InverseOptions& opts) {
    const GridDomain& g = *p.grid();
    const auto& tris = g.triangles();
    for (std::size_t n = 0; n < g.size(); ++n)
        if (!p.u.is_valid(n) || !p.v.is_valid(n) || !std::isfinite(p.u[n]) || !std::isfinite(p.v[n]))
            throw Error("non-injective-map", "pair has invalid nodes");

    auto orient = [&](const std::array<std::size_t, 3>& t) {
        return (p.u[t[1]] - p.u[t[0]]) * (p.v[t[2]] - p.v[t[0]]) - (p.v[t[1]] - p.v[t[0]]) * (p.u[t[2]] - p.u[t[0]]);
    };
    // Image areas relative to the (uniform) source areas give the discrete Jacobian.
    double maxdet = 0;
    std::vector<double> det(tris.size());
    for (std::size_t t = 0; t < tris.size(); ++t) {
        det[t] = orient(tris[t]);
        maxdet = std::max(maxdet, std::abs(det[t]));
    }
    if (!(maxdet > 0)) throw Error("non-injective-map", "image is degenerate");
    double sign = 0;
    for (double d : det) {
        if (std::abs(d) <= opts.det_threshold * maxdet)
            throw Error("non-injective-map", "Jacobian determinant below threshold");
        double s = d > 0 ? 1.0 : -1.0;
        if (sign == 0) sign = s;
        if (s != sign) throw Error("non-injective-map", "image triangles change orientation");
    }
    std::vector<double> bu, bv;
    for (std::size_t n : g.loop()) {
        bu.push_back(p.u[n]);
        bv.push_back(p.v[n]);
    }
    std::size_t probe = g.interior().front();
    std::size_t c = center_node(g);
    if (g.is_interior(c)) probe = c;
    if (loop_winding(bu, bv, p.u[probe], p.v[probe]) != static_cast<int>(sign))
        throw Error("non-injective-map", "boundary image does not wind once around the image");

    double umin = *std::min_element(p.u.values.begin(), p.u.values.end());
    double umax = *std::max_element(p.u.values.begin(), p.u.values.end());
    double vmin = *std::min_element(p.v.values.begin(), p.v.values.end());
    double vmax = *std::max_element(p.v.values.begin(), p.v.values.end());
    if (!(umax > umin) || !(vmax > vmin)) throw Error("non-injective-map", "image has no interior");
    int onx = opts.nx > 0 ? opts.nx : g.nx(), ony = opts.ny > 0 ? opts.ny : g.ny();
    GridPtr out = build_grid(Rectangle{umin, umax, vmin, vmax}, onx, ony);

    // Bucket the image triangles.
    const int B = std::max(onx, ony);
    auto bucket = [&](double val, double lo, double hi) {
        int b = static_cast<int>((val - lo) / (hi - lo) * B);
        return std::clamp(b, 0, B - 1);
    };
    std::vector<std::vector<std::size_t>> buckets(static_cast<std::size_t>(B) * B);
    for (std::size_t t = 0; t < tris.size(); ++t) {
        double tu0 = 1e300, tu1 = -1e300, tv0 = 1e300, tv1 = -1e300;
        for (auto k : tris[t]) {
            tu0 = std::min(tu0, p.u[k]);
            tu1 = std::max(tu1, p.u[k]);
            tv0 = std::min(tv0, p.v[k]);
            tv1 = std::max(tv1, p.v[k]);
        }
        for (int bj = bucket(tv0, vmin, vmax); bj <= bucket(tv1, vmin, vmax); ++bj)
            for (int bi = bucket(tu0, umin, umax); bi <= bucket(tu1, umin, umax); ++bi)
                buckets[static_cast<std::size_t>(bj) * B + bi].push_back(t);
    }

    SolutionPair q;
    q.a = p.a;
    q.u = ScalarField::zeros(out);
    q.v = ScalarField::zeros(out);
    q.u.valid.assign(out->size(), 0);
    q.v.valid.assign(out->size(), 0);
    for (std::size_t n = 0; n < out->size(); ++n) {
        double x = out->node(n).x, y = out->node(n).y;
        const auto& cand = buckets[static_cast<std::size_t>(bucket(y, vmin, vmax)) * B + bucket(x, umin, umax)];
        for (std::size_t t : cand) {
            const auto& tr = tris[t];
            double area = det[t];
            auto o = [&](double ax, double ay, double bx, double by, double cx, double cy) {
                return (bx - ax) * (cy - ay) - (by - ay) * (cx - ax);
            };
            double w0 = o(x, y, p.u[tr[1]], p.v[tr[1]], p.u[tr[2]], p.v[tr[2]]) / area;
            double w1 = o(p.u[tr[0]], p.v[tr[0]], x, y, p.u[tr[2]], p.v[tr[2]]) / area;
            double w2 = 1.0 - w0 - w1;
            if (w0 < -1e-12 || w1 < -1e-12 || w2 < -1e-12) continue;
            q.u[n] = w0 * g.node(tr[0]).x + w1 * g.node(tr[1]).x + w2 * g.node(tr[2]).x;
            q.v[n] = w0 * g.node(tr[0]).y + w1 * g.node(tr[1]).y + w2 * g.node(tr[2]).y;
            q.u.valid[n] = q.v.valid[n] = 1;
            break;
        }
        if (!q.u.valid[n]) {
            q.u[n] = std::numeric_limits<double>::quiet_NaN();
            q.v[n] = std::numeric_limits<double>::quiet_NaN();
        }
    }
    return q;
}

nlohmann::json to_json(const SolutionPair& p) {
    const GridDomain& g = *p.grid();
    return {{"a", p.a},
            {"domain", {{"shape", shape_to_json(g.shape())}, {"nx", g.nx()}, {"ny", g.ny()}}},
            {"u_values", values_json(p.u)},
            {"v_values", values_json(p.v)},
            {"verified", p.verified},
            {"verified_tol", p.verified_tol}};
}

SolutionPair pair_from_json(const nlohmann::json& j) {
    const auto& d = j.at("domain");
    GridPtr g = build_grid(shape_from_json(d.at("shape")), d.at("nx").get<int>(), d.at("ny").get<int>());
    SolutionPair p;
    p.a = j.at("a").get<double>();
    p.u = ScalarField::zeros(g);
    p.v = ScalarField::zeros(g);
    values_from_json(p.u, j.at("u_values"));
    values_from_json(p.v, j.at("v_values"));
    p.verified = j.value("verified", false);
    p.verified_tol = j.value("verified_tol", 0.0);
    return p;
}

std::string to_csv(const SolutionPair& p) {
    std::ostringstream os;
    os << "i,j,x,y,u,v\n";
    for (std::size_t n = 0; n < p.u.size(); ++n) {
        const Node& q = p.grid()->node(n);
        os << q.i << ',' << q.j << ',' << fmt(q.x) << ',' << fmt(q.y) << ','
           << (p.u.is_valid(n) ? fmt(p.u[n]) : "nan") << ',' << (p.v.is_valid(n) ? fmt(p.v[n]) : "nan") << '\n';
    }
    return os.str();
}

}  // namespace slcr
