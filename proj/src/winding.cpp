#include "slcr/winding.hpp"

#include <algorithm>
#include <functional>
#include <cmath>
#include <numbers>
#include <numeric>

#include "slcr/error.hpp"

namespace slcr {

namespace {

constexpr double kPi = std::numbers::pi;

struct Diff {
    const SolutionPair& p1;
    const SolutionPair& p2;

    std::optional<std::pair<double, double>> at(double x, double y) const {
        auto u1 = p1.u.interpolate(x, y), u2 = p2.u.interpolate(x, y);
        auto v1 = p1.v.interpolate(x, y), v2 = p2.v.interpolate(x, y);
        if (!u1 || !u2 || !v1 || !v2) return std::nullopt;
        return std::pair{*u1 - *u2, *v1 - *v2};
    }
};

// Sum of angle increments; a straight segment between samples never sweeps
// pi unless it passes through the origin, so this is the exact degree of
// the piecewise-linear loop.
std::optional<int> pl_winding(const std::vector<std::pair<double, double>>& pts) {
    double total = 0;
    for (std::size_t k = 0; k < pts.size(); ++k) {
        auto [ax, ay] = pts[k];
        auto [bx, by] = pts[(k + 1) % pts.size()];
        if ((ax == 0 && ay == 0) || (bx == 0 && by == 0)) return std::nullopt;
        double cr = ax * by - ay * bx, dt = ax * bx + ay * by;
        if (cr == 0 && dt < 0) return std::nullopt;
        total += std::atan2(cr, dt);
    }
    return static_cast<int>(std::lround(total / (2 * kPi)));
}

std::optional<int> circle_winding(const Diff& d, double cx, double cy, double r, int samples) {
    std::vector<std::pair<double, double>> pts;
    pts.reserve(samples);
    for (int s = 0; s < samples; ++s) {
        double t = 2 * kPi * s / samples;
        auto v = d.at(cx + r * std::cos(t), cy + r * std::sin(t));
        if (!v) return std::nullopt;
        pts.push_back(*v);
    }
    for (std::size_t k = 0; k < pts.size(); ++k) {
        auto [ax, ay] = pts[k];
        auto [bx, by] = pts[(k + 1) % pts.size()];
        if (std::abs(std::atan2(ax * by - ay * bx, ax * bx + ay * by)) > 0.5 * kPi) return std::nullopt;
    }
    return pl_winding(pts);
}

double seg_distance(double px, double py, double ax, double ay, double bx, double by) {
    double dx = bx - ax, dy = by - ay;
    double t = std::clamp(((px - ax) * dx + (py - ay) * dy) / (dx * dx + dy * dy), 0.0, 1.0);
    return std::hypot(px - ax - t * dx, py - ay - t * dy);
}

}  // namespace

int winding_number(const std::vector<std::pair<double, double>>& loop) {
    if (loop.empty()) return 0;
    double total = 0;
    for (std::size_t k = 0; k < loop.size(); ++k) {
        auto [ax, ay] = loop[k];
        auto [bx, by] = loop[(k + 1) % loop.size()];
        if ((ax == 0 && ay == 0) || (bx == 0 && by == 0)) throw Error("zero-on-loop", "loop passes through 0");
        double step = std::atan2(ax * by - ay * bx, ax * bx + ay * by);
        if (std::abs(step) >= kPi * (1 - 1e-12))
            throw Error("inadequate-sampling", "consecutive samples subtend an angle >= pi");
        total += step;
    }
    return static_cast<int>(std::lround(total / (2 * kPi)));
}

WindingReport find_zeros(const SolutionPair& p1, const SolutionPair& p2) {
    const GridDomain& g = *p1.grid();
    if (p2.grid() != p1.grid() && (p2.grid()->nx() != g.nx() || p2.grid()->ny() != g.ny() ||
                                   shape_to_json(p2.grid()->shape()) != shape_to_json(g.shape())))
        throw Error("pair-mismatch", "pairs live on different grids");
    if (p1.a != p2.a) throw Error("pair-mismatch", "pairs have different a");

    const std::size_t n = g.size();
    std::vector<double> du(n), dv(n);
    double scale = 1, dmax = 0;
    for (std::size_t k = 0; k < n; ++k) {
        du[k] = p1.u[k] - p2.u[k];
        dv[k] = p1.v[k] - p2.v[k];
        scale = std::max({scale, std::abs(p1.u[k]), std::abs(p1.v[k]), std::abs(p2.u[k]), std::abs(p2.v[k])});
        dmax = std::max({dmax, std::abs(du[k]), std::abs(dv[k])});
    }
    if (dmax <= 1e-14 * scale) throw Error("identical-pairs", "the pairs agree at every node");

    WindingReport rep;
    const double h = std::max(g.hx(), g.hy());
    const double ztol = 1e-12 * dmax;
    const auto& loop = g.loop();

    // Boundary zeros: vanishing nodes, or loop edges whose endpoint values
    // are antiparallel (the linear interpolant passes through 0).
    std::vector<std::pair<double, double>> bpts;
    std::vector<std::pair<double, double>> bzeros;
    for (std::size_t k = 0; k < loop.size(); ++k) {
        std::size_t a = loop[k], b = loop[(k + 1) % loop.size()];
        bpts.push_back({du[a], dv[a]});
        if (std::hypot(du[a], dv[a]) <= ztol) {
            bzeros.push_back({g.node(a).x, g.node(a).y});
            continue;
        }
        double na = std::hypot(du[a], dv[a]), nb = std::hypot(du[b], dv[b]);
        if (nb <= ztol) continue;
        double cr = du[a] * dv[b] - dv[a] * du[b], dt = du[a] * du[b] + dv[a] * dv[b];
        if (std::abs(cr) <= 1e-12 * na * nb && dt < 0) {
            double t = na / (na + nb);
            bzeros.push_back({g.node(a).x + t * (g.node(b).x - g.node(a).x),
                              g.node(a).y + t * (g.node(b).y - g.node(a).y)});
        }
    }
    rep.m = static_cast<int>(bzeros.size());
    for (auto [x, y] : bzeros) rep.zeros.push_back({x, y, 1, true, {}, {}});
    if (rep.m == 0) rep.boundary_winding = pl_winding(bpts);

    auto near_boundary = [&](double x, double y) {
        for (std::size_t k = 0; k < loop.size(); ++k) {
            const Node& a = g.node(loop[k]);
            const Node& b = g.node(loop[(k + 1) % loop.size()]);
            if (seg_distance(x, y, a.x, a.y, b.x, b.y) <= 1e-9 * h) return true;
        }
        return false;
    };

    // Zeros of the linear interpolant, one candidate per triangle.
    struct Cand {
        double x, y;
        int index;
    };
    std::vector<Cand> cand;
    for (const auto& t : g.triangles()) {
        double a1 = du[t[1]] - du[t[0]], a2 = du[t[2]] - du[t[0]];
        double b1 = dv[t[1]] - dv[t[0]], b2 = dv[t[2]] - dv[t[0]];
        double det = a1 * b2 - a2 * b1;
        if (det == 0) continue;
        double w1 = (-du[t[0]] * b2 + dv[t[0]] * a2) / det;
        double w2 = (-dv[t[0]] * a1 + du[t[0]] * b1) / det;
        double w0 = 1 - w1 - w2;
        const double eps = -1e-12;
        if (w0 < eps || w1 < eps || w2 < eps) continue;
        double x = w0 * g.node(t[0]).x + w1 * g.node(t[1]).x + w2 * g.node(t[2]).x;
        double y = w0 * g.node(t[0]).y + w1 * g.node(t[1]).y + w2 * g.node(t[2]).y;
        if (near_boundary(x, y)) continue;
        int idx = det > 0 ? 1 : -1;
        bool dup = false;
        for (const auto& c : cand)
            if (std::hypot(c.x - x, c.y - y) <= 1e-9 * h && c.index == idx) dup = true;
        if (!dup) cand.push_back({x, y, idx});
    }

    // Merge candidates closer than two cells.
    std::vector<std::size_t> parent(cand.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t i) {
        return parent[i] == i ? i : parent[i] = find(parent[i]);
    };
    for (std::size_t i = 0; i < cand.size(); ++i)
        for (std::size_t j = i + 1; j < cand.size(); ++j)
            if (std::hypot(cand[i].x - cand[j].x, cand[i].y - cand[j].y) < 2 * h) parent[find(i)] = find(j);

    struct Cluster {
        double x = 0, y = 0, radius = 0;
        int index = 0, count = 0;
    };
    std::vector<Cluster> clusters;
    std::vector<std::size_t> slot(cand.size(), GridDomain::npos);
    for (std::size_t i = 0; i < cand.size(); ++i) {
        std::size_t r = find(i);
        if (slot[r] == GridDomain::npos) {
            slot[r] = clusters.size();
            clusters.push_back({});
        }
        Cluster& c = clusters[slot[r]];
        c.x += cand[i].x;
        c.y += cand[i].y;
        c.index += cand[i].index;
        ++c.count;
    }
    for (auto& c : clusters) {
        c.x /= c.count;
        c.y /= c.count;
    }
    for (std::size_t i = 0; i < cand.size(); ++i) {
        Cluster& c = clusters[slot[find(i)]];
        c.radius = std::max(c.radius, std::hypot(cand[i].x - c.x, cand[i].y - c.y));
    }

    Diff diff{p1, p2};
    for (std::size_t ci = 0; ci < clusters.size(); ++ci) {
        const Cluster& c = clusters[ci];
        double r = std::max(3 * h, c.radius + h);
        double gap = 1e300;
        for (std::size_t cj = 0; cj < clusters.size(); ++cj)
            if (cj != ci)
                gap = std::min(gap, std::hypot(clusters[cj].x - c.x, clusters[cj].y - c.y) - clusters[cj].radius);
        // Zeros on shared edges or vertices make the per-triangle signs
        // unreliable; the circle degree is authoritative when one fits.
        int k = c.index;
        for (int attempt = 0; attempt < 4; ++attempt) {
            if (r >= gap) {
                r = 0.5 * gap;
                if (r <= c.radius) break;
                continue;
            }
            auto w = circle_winding(diff, c.x, c.y, r, 256);
            if (w) {
                k = *w;
                break;
            }
            r *= 0.5;
            if (r <= c.radius) break;
        }
        if (k == 0) continue;  // cancelling pair from discretization noise
        if (k < 0) throw Error("zero-cluster-unresolved", "cluster with negative index; resolution too coarse");

        // A single candidate is the exact zero of the linear interpolant.
        ZeroRecord z{c.x, c.y, k, false, {}, {}};
        rep.zeros.push_back(z);
        rep.interior_sum += k;
    }
    std::stable_sort(rep.zeros.begin(), rep.zeros.end(), [](const ZeroRecord& a, const ZeroRecord& b) {
        return a.on_boundary != b.on_boundary ? !a.on_boundary : (a.x != b.x ? a.x < b.x : a.y < b.y);
    });
    return rep;
}

LocalModel fit_local_model(const SolutionPair& p1, const SolutionPair& p2, const ZeroRecord& zero,
                           double inner_cells, double outer_cells) {
    if (zero.on_boundary) throw Error("ill-conditioned-fit", "boundary zeros carry no local model");
    const GridDomain& g = *p1.grid();
    const double h = std::max(g.hx(), g.hy());
    auto v1 = p1.v.interpolate(zero.x, zero.y);
    if (!v1) throw Error("ill-conditioned-fit", "zero lies outside the grid");
    LocalModel lm;
    lm.k = zero.k;
    lm.lambda = std::sqrt(2.0) * std::pow(*v1 * *v1 + zero.y * zero.y + p1.a * p1.a, 0.25);
    Diff diff{p1, p2};
    std::complex<double> num = 0;
    double den = 0, wnorm = 0;
    std::vector<std::pair<std::complex<double>, std::complex<double>>> samples;
    const int rings = 4, per_ring = 64;
    for (int ri = 0; ri < rings; ++ri) {
        double r = h * (inner_cells + (outer_cells - inner_cells) * ri / (rings - 1));
        for (int s = 0; s < per_ring; ++s) {
            double t = 2 * kPi * s / per_ring;
            double x = zero.x + r * std::cos(t), y = zero.y + r * std::sin(t);
            auto d = diff.at(x, y);
            if (!d) throw Error("ill-conditioned-fit", "fit ring leaves the grid");
            std::complex<double> w(lm.lambda * d->first, d->second);
            std::complex<double> zk = std::pow(std::complex<double>(lm.lambda * (x - zero.x), y - zero.y), lm.k);
            num += std::conj(zk) * w;
            den += std::norm(zk);
            wnorm += std::norm(w);
            samples.push_back({zk, w});
        }
    }
    if (!(den > 0) || !(wnorm > 0)) throw Error("ill-conditioned-fit", "degenerate ring data");
    lm.C = num / den;
    double res = 0;
    for (auto& [zk, w] : samples) res += std::norm(w - lm.C * zk);
    lm.residual = std::sqrt(res / wnorm);
    return lm;
}

CountAudit audit_count_morse(const BoundaryFunction& phi1, const BoundaryFunction& phi2, const WindingReport& report) {
    if (phi1.size() != phi2.size()) throw Error("pair-mismatch", "boundary data sizes differ");
    BoundaryFunction d{phi1.grid, phi1.samples};
    for (std::size_t k = 0; k < d.size(); ++k) d.samples[k] -= phi2[k];
    MorseReport mr = classify_morse(d);
    if (!mr.is_morse) throw Error("not-morse", "boundary difference is not a Morse function");
    CountAudit au;
    au.l = mr.l;
    au.count = report.interior_sum + report.m;
    au.bound_passed = au.count <= au.l - 1;
    if (report.boundary_winding) {
        // (d/dx, d/dy)(f1-f2) = (v1-v2, u1-u2) is the report's loop with its
        // components swapped, which reverses the degree.
        au.k_df = -*report.boundary_winding;
        au.winding_passed = *au.k_df >= 1 - au.l && *au.k_df <= 1 + au.l;
    }
    return au;
}

CountAudit audit_count_transverse(const SolutionPair& p1, const SolutionPair& p2, const WindingReport& report) {
    BoundaryFunction w = BoundaryFunction::trace(p1.v);
    BoundaryFunction w2 = BoundaryFunction::trace(p2.v);
    for (std::size_t k = 0; k < w.size(); ++k) w.samples[k] -= w2[k];
    TransverseReport tr = classify_transverse(w);
    if (!tr.is_transverse) throw Error("not-transverse", "boundary v-difference is not transverse");
    CountAudit au;
    au.l = tr.l;
    au.count = report.interior_sum + report.m;
    au.bound_passed = au.count <= au.l;
    return au;
}

std::pair<double, double> forbidden_data_transform([[maybe_unused]] double u_hat, double v_hat, double y_hat,
                                                   double p_hat, double q_hat, double a) {
    if (p_hat == 0 && q_hat == 0) throw Error("zero-derivative-data", "(p, q) must be nonzero");
    if (a == 0) throw Error("zero-a-rejected", "the transform needs a != 0");
    double D = 0.5 / std::sqrt(v_hat * v_hat + y_hat * y_hat + a * a) * p_hat * p_hat + q_hat * q_hat;
    return {-p_hat / D, q_hat / D};
}

nlohmann::json to_json(const WindingReport& r) {
    nlohmann::json zs = nlohmann::json::array();
    for (const auto& z : r.zeros) {
        nlohmann::json e = {{"x", z.x}, {"y", z.y}, {"k", z.k}, {"on_boundary", z.on_boundary}};
        if (z.C) e["C"] = {z.C->real(), z.C->imag()};
        if (z.lambda) e["lambda"] = *z.lambda;
        zs.push_back(e);
    }
    nlohmann::json j = {{"zeros", zs}, {"interior_sum", r.interior_sum}, {"m", r.m}};
    j["boundary_winding"] = r.boundary_winding ? nlohmann::json(*r.boundary_winding) : nlohmann::json(nullptr);
    j["l"] = r.l ? nlohmann::json(*r.l) : nlohmann::json(nullptr);
    return j;
}

}  // namespace slcr
