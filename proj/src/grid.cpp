#include "slcr/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "slcr/error.hpp"

namespace slcr {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double orient(double ax, double ay, double bx, double by, double cx, double cy) {
    return (bx - ax) * (cy - ay) - (by - ay) * (cx - ax);
}

std::array<double, 2> triangle_gradient(const GridDomain& g, const std::array<std::size_t, 3>& t,
                                        const std::vector<double>& f) {
    const Node& a = g.node(t[0]);
    const Node& b = g.node(t[1]);
    const Node& c = g.node(t[2]);
    double x1 = b.x - a.x, y1 = b.y - a.y, x2 = c.x - a.x, y2 = c.y - a.y;
    double d1 = f[t[1]] - f[t[0]], d2 = f[t[2]] - f[t[0]];
    double det = x1 * y2 - x2 * y1;
    return {(d1 * y2 - d2 * y1) / det, (x1 * d2 - x2 * d1) / det};
}

}  // namespace

GridPtr build_grid(const Shape& shape, int nx, int ny) {
    if (nx < 4 || ny < 4) throw Error("resolution-too-coarse", "nx and ny must be at least 4");
    std::shared_ptr<GridDomain> g(new GridDomain());
    g->shape_ = shape;
    g->nx_ = nx;
    g->ny_ = ny;

    if (auto* r = std::get_if<Rectangle>(&shape)) {
        if (!(r->x1 > r->x0) || !(r->y1 > r->y0) || !std::isfinite(r->x1 - r->x0) ||
            !std::isfinite(r->y1 - r->y0))
            throw Error("invalid-shape-parameters", "rectangle needs positive side lengths");
        g->ox_ = r->x0;
        g->oy_ = r->y0;
        g->hx_ = (r->x1 - r->x0) / (nx - 1);
        g->hy_ = (r->y1 - r->y0) / (ny - 1);
    } else {
        const Disc& d = std::get<Disc>(shape);
        if (!(d.r > 0) || !std::isfinite(d.r) || !std::isfinite(d.cx) || !std::isfinite(d.cy))
            throw Error("invalid-shape-parameters", "disc needs a positive radius");
        g->ox_ = d.cx - d.r;
        g->oy_ = d.cy - d.r;
        g->hx_ = 2.0 * d.r / (nx - 1);
        g->hy_ = 2.0 * d.r / (ny - 1);
    }

    const std::size_t npos = GridDomain::npos;
    auto lat = [nx](int i, int j) { return static_cast<std::size_t>(j) * nx + i; };
    std::vector<std::uint8_t> inside(static_cast<std::size_t>(nx) * ny);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i)
            inside[lat(i, j)] = g->in_shape(g->lattice_x(i), g->lattice_y(j));

    // Cells with >= 3 corners inside contribute triangles; corners listed
    // counter-clockwise so the triangles are positively oriented.
    struct LatTri {
        std::array<std::size_t, 3> v;
        std::size_t cell;
    };
    std::vector<LatTri> ltris;
    std::vector<std::uint8_t> used(inside.size());
    for (int j = 0; j + 1 < ny; ++j) {
        for (int i = 0; i + 1 < nx; ++i) {
            std::array<std::size_t, 4> c{lat(i, j), lat(i + 1, j), lat(i + 1, j + 1), lat(i, j + 1)};
            int cnt = 0;
            for (auto k : c) cnt += inside[k];
            std::size_t cell = static_cast<std::size_t>(j) * (nx - 1) + i;
            if (cnt == 4) {
                ltris.push_back({{c[0], c[1], c[2]}, cell});
                ltris.push_back({{c[0], c[2], c[3]}, cell});
            } else if (cnt == 3) {
                std::array<std::size_t, 3> t{};
                int m = 0;
                for (auto k : c)
                    if (inside[k]) t[m++] = k;
                ltris.push_back({t, cell});
            } else {
                continue;
            }
            for (auto k : c)
                if (inside[k]) used[k] = 1;
        }
    }

    g->lattice_.assign(inside.size(), npos);
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            if (!used[lat(i, j)]) continue;
            g->lattice_[lat(i, j)] = g->nodes_.size();
            g->nodes_.push_back({i, j, g->lattice_x(i), g->lattice_y(j)});
        }
    }
    const std::size_t n = g->nodes_.size();
    g->nbr_.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        int i = g->nodes_[k].i, j = g->nodes_[k].j;
        g->nbr_[k] = {g->at(i + 1, j), g->at(i - 1, j), g->at(i, j + 1), g->at(i, j - 1)};
    }

    g->cell_tris_.assign(static_cast<std::size_t>(nx - 1) * (ny - 1), {npos, npos});
    for (const auto& lt : ltris) {
        std::array<std::size_t, 3> t{g->lattice_[lt.v[0]], g->lattice_[lt.v[1]], g->lattice_[lt.v[2]]};
        auto& slot = g->cell_tris_[lt.cell];
        (slot[0] == npos ? slot[0] : slot[1]) = g->tris_.size();
        g->tris_.push_back(t);
    }

    // Boundary edges are directed triangle edges whose reverse is absent;
    // with positively oriented triangles they run counter-clockwise.
    std::unordered_set<std::uint64_t> edges;
    auto key = [n](std::size_t a, std::size_t b) { return static_cast<std::uint64_t>(a) * n + b; };
    for (const auto& t : g->tris_)
        for (int e = 0; e < 3; ++e) edges.insert(key(t[e], t[(e + 1) % 3]));
    std::unordered_map<std::size_t, std::size_t> next;
    std::size_t bcount = 0;
    for (const auto& t : g->tris_) {
        for (int e = 0; e < 3; ++e) {
            std::size_t a = t[e], b = t[(e + 1) % 3];
            if (edges.count(key(b, a))) continue;
            ++bcount;
            if (!next.emplace(a, b).second)
                throw Error("resolution-too-coarse", "boundary loop is not simple");
        }
    }
    if (next.empty()) throw Error("resolution-too-coarse", "no cells inside the shape");

    auto [cx, cy] = g->center();
    std::size_t start = npos;
    double best_ang = 0, best_rad = 0;
    for (const auto& [a, b] : next) {
        double ang = std::atan2(g->nodes_[a].y - cy, g->nodes_[a].x - cx);
        if (ang < 0) ang += kTwoPi;
        double rad = std::hypot(g->nodes_[a].x - cx, g->nodes_[a].y - cy);
        if (start == npos || ang < best_ang || (ang == best_ang && rad < best_rad) ||
            (ang == best_ang && rad == best_rad && a < start)) {
            start = a;
            best_ang = ang;
            best_rad = rad;
        }
    }
    g->loop_pos_.assign(n, npos);
    std::size_t cur = start;
    do {
        if (g->loop_pos_[cur] != npos)
            throw Error("resolution-too-coarse", "boundary loop is not simple");
        g->loop_pos_[cur] = g->loop_.size();
        g->loop_.push_back(cur);
        auto it = next.find(cur);
        if (it == next.end()) throw Error("resolution-too-coarse", "boundary loop is open");
        cur = it->second;
    } while (cur != start);
    if (g->loop_.size() != bcount)
        throw Error("resolution-too-coarse", "boundary splits into several loops");

    g->interior_pos_.assign(n, npos);
    for (std::size_t k = 0; k < n; ++k) {
        bool full = true;
        for (auto nb : g->nbr_[k]) full = full && nb != npos;
        bool on_loop = g->loop_pos_[k] != npos;
        if (full == on_loop)
            throw Error("resolution-too-coarse", "lattice hull and boundary loop disagree");
        if (full) {
            g->interior_pos_[k] = g->interior_.size();
            g->interior_.push_back(k);
        }
    }
    if (g->interior_.empty()) throw Error("resolution-too-coarse", "no interior nodes");

    std::vector<double> s(g->loop_.size() + 1, 0.0);
    for (std::size_t k = 0; k < g->loop_.size(); ++k) {
        const Node& a = g->nodes_[g->loop_[k]];
        const Node& b = g->nodes_[g->loop_[(k + 1) % g->loop_.size()]];
        s[k + 1] = s[k] + std::hypot(b.x - a.x, b.y - a.y);
    }
    g->perimeter_ = s.back();
    g->theta_.resize(g->loop_.size());
    for (std::size_t k = 0; k < g->loop_.size(); ++k) g->theta_[k] = kTwoPi * s[k] / g->perimeter_;
    return g;
}

double GridDomain::lattice_x(int i) const {
    if (auto* d = std::get_if<Disc>(&shape_))
        return d->cx + d->r * (static_cast<double>(2 * i - (nx_ - 1)) / (nx_ - 1));
    const auto& r = std::get<Rectangle>(shape_);
    return i == nx_ - 1 ? r.x1 : r.x0 + i * hx_;
}

double GridDomain::lattice_y(int j) const {
    if (auto* d = std::get_if<Disc>(&shape_))
        return d->cy + d->r * (static_cast<double>(2 * j - (ny_ - 1)) / (ny_ - 1));
    const auto& r = std::get<Rectangle>(shape_);
    return j == ny_ - 1 ? r.y1 : r.y0 + j * hy_;
}

std::pair<double, double> GridDomain::center() const {
    if (auto* d = std::get_if<Disc>(&shape_)) return {d->cx, d->cy};
    const auto& r = std::get<Rectangle>(shape_);
    return {0.5 * (r.x0 + r.x1), 0.5 * (r.y0 + r.y1)};
}

bool GridDomain::in_shape(double x, double y) const {
    if (auto* d = std::get_if<Disc>(&shape_)) {
        double dx = x - d->cx, dy = y - d->cy;
        double r2 = d->r * d->r;
        return dx * dx + dy * dy <= r2 + 2.0 * std::numeric_limits<double>::epsilon() * r2;
    }
    const auto& r = std::get<Rectangle>(shape_);
    return x >= r.x0 && x <= r.x1 && y >= r.y0 && y <= r.y1;
}

std::size_t GridDomain::at(int i, int j) const {
    if (i < 0 || j < 0 || i >= nx_ || j >= ny_) return npos;
    return lattice_[static_cast<std::size_t>(j) * nx_ + i];
}

std::array<std::size_t, 2> GridDomain::cell_triangles(int ci, int cj) const {
    if (ci < 0 || cj < 0 || ci >= nx_ - 1 || cj >= ny_ - 1) return {npos, npos};
    return cell_tris_[static_cast<std::size_t>(cj) * (nx_ - 1) + ci];
}

bool GridDomain::locate(double x, double y, std::size_t& tri, std::array<double, 3>& w) const {
    if (!std::isfinite(x) || !std::isfinite(y)) return false;
    int ci = static_cast<int>(std::floor((x - ox_) / hx_));
    int cj = static_cast<int>(std::floor((y - oy_) / hy_));
    constexpr double tol = -1e-12;
    for (int dj = 0; dj <= 2; ++dj) {
        for (int di = 0; di <= 2; ++di) {
            // centre cell first, then its neighbours
            int i = ci + (di == 0 ? 0 : (di == 1 ? -1 : 1));
            int j = cj + (dj == 0 ? 0 : (dj == 1 ? -1 : 1));
            if (i < 0 || j < 0 || i >= nx_ - 1 || j >= ny_ - 1) continue;
            for (std::size_t t : cell_tris_[static_cast<std::size_t>(j) * (nx_ - 1) + i]) {
                if (t == npos) continue;
                const Node& a = nodes_[tris_[t][0]];
                const Node& b = nodes_[tris_[t][1]];
                const Node& c = nodes_[tris_[t][2]];
                double area = orient(a.x, a.y, b.x, b.y, c.x, c.y);
                double w0 = orient(x, y, b.x, b.y, c.x, c.y) / area;
                double w1 = orient(a.x, a.y, x, y, c.x, c.y) / area;
                double w2 = 1.0 - w0 - w1;
                if (w0 >= tol && w1 >= tol && w2 >= tol) {
                    tri = t;
                    w = {w0, w1, w2};
                    return true;
                }
            }
        }
    }
    return false;
}

ScalarField ScalarField::zeros(GridPtr g) {
    ScalarField f;
    f.values.assign(g->size(), 0.0);
    f.grid = std::move(g);
    return f;
}

ScalarField ScalarField::sample(GridPtr g, const std::function<double(double, double)>& fn) {
    ScalarField f = zeros(std::move(g));
    for (std::size_t k = 0; k < f.size(); ++k) f.values[k] = fn(f.grid->node(k).x, f.grid->node(k).y);
    return f;
}

std::optional<double> ScalarField::interpolate(double x, double y) const {
    std::size_t t;
    std::array<double, 3> w;
    if (!grid->locate(x, y, t, w)) return std::nullopt;
    const auto& tri = grid->triangles()[t];
    double s = 0;
    for (int k = 0; k < 3; ++k) {
        if (!is_valid(tri[k])) return std::nullopt;
        s += w[k] * values[tri[k]];
    }
    return s;
}

BoundaryFunction BoundaryFunction::trace(const ScalarField& f) {
    BoundaryFunction b{f.grid, {}};
    b.samples.reserve(f.grid->loop().size());
    for (auto n : f.grid->loop()) b.samples.push_back(f.values[n]);
    return b;
}

BoundaryFunction BoundaryFunction::from_xy(GridPtr g, const std::function<double(double, double)>& fn) {
    BoundaryFunction b{std::move(g), {}};
    for (auto n : b.grid->loop()) b.samples.push_back(fn(b.grid->node(n).x, b.grid->node(n).y));
    return b;
}

BoundaryFunction BoundaryFunction::from_theta(GridPtr g, const std::function<double(double)>& fn) {
    BoundaryFunction b{std::move(g), {}};
    for (double t : b.grid->theta()) b.samples.push_back(fn(t));
    return b;
}

std::pair<ScalarField, ScalarField> field_gradient(const ScalarField& f) {
    const GridDomain& g = *f.grid;
    ScalarField fx = ScalarField::zeros(f.grid), fy = ScalarField::zeros(f.grid);
    const auto npos = GridDomain::npos;

    auto incident_mean = [&](std::size_t n, int comp) {
        const Node& p = g.node(n);
        double s = 0;
        int cnt = 0;
        for (int j = p.j - 1; j <= p.j; ++j) {
            for (int i = p.i - 1; i <= p.i; ++i) {
                for (std::size_t t : g.cell_triangles(i, j)) {
                    if (t == npos) continue;
                    const auto& tr = g.triangles()[t];
                    if (tr[0] != n && tr[1] != n && tr[2] != n) continue;
                    s += triangle_gradient(g, tr, f.values)[comp];
                    ++cnt;
                }
            }
        }
        return cnt ? s / cnt : 0.0;
    };

    auto axis = [&](std::size_t n, Dir fwd, Dir bwd, double h, int comp) {
        std::size_t p = g.neighbor(n, fwd), m = g.neighbor(n, bwd);
        const auto& v = f.values;
        if (p != npos && m != npos) return (v[p] - v[m]) / (2 * h);
        if (p != npos) {
            std::size_t pp = g.neighbor(p, fwd);
            if (pp != npos) return (-3 * v[n] + 4 * v[p] - v[pp]) / (2 * h);
            return (v[p] - v[n]) / h;
        }
        if (m != npos) {
            std::size_t mm = g.neighbor(m, bwd);
            if (mm != npos) return (3 * v[n] - 4 * v[m] + v[mm]) / (2 * h);
            return (v[n] - v[m]) / h;
        }
        return incident_mean(n, comp);
    };

    for (std::size_t n = 0; n < g.size(); ++n) {
        fx.values[n] = axis(n, Dir::E, Dir::W, g.hx(), 0);
        fy.values[n] = axis(n, Dir::N, Dir::S, g.hy(), 1);
    }
    return {fx, fy};
}

std::size_t nearest_node(const GridDomain& g, double x, double y) {
    std::size_t best = 0;
    double bd = std::numeric_limits<double>::infinity();
    for (std::size_t n = 0; n < g.size(); ++n) {
        double d = std::hypot(g.node(n).x - x, g.node(n).y - y);
        if (d < bd) {
            bd = d;
            best = n;
        }
    }
    return best;
}

std::size_t center_node(const GridDomain& g) {
    auto [cx, cy] = g.center();
    return nearest_node(g, cx, cy);
}

MorseReport classify_morse(const BoundaryFunction& phi) {
    const std::size_t n = phi.size();
    if (n < 8) throw Error("too-few-samples", "classification needs at least 8 boundary samples");
    MorseReport r;
    const auto& th = phi.grid->theta();
    for (std::size_t k = 0; k < n; ++k) {
        if (phi[k] == phi[(k + 1) % n]) {
            r.reason = "flat-segment-detected";
            r.maxima.clear();
            r.minima.clear();
            return r;
        }
    }
    for (std::size_t k = 0; k < n; ++k) {
        double prev = phi[(k + n - 1) % n], cur = phi[k], nxt = phi[(k + 1) % n];
        if (cur > prev && cur > nxt) r.maxima.push_back(th[k]);
        if (cur < prev && cur < nxt) r.minima.push_back(th[k]);
    }
    r.l = static_cast<int>(r.maxima.size());
    r.is_morse = r.l >= 1 && r.maxima.size() == r.minima.size();
    return r;
}

TransverseReport classify_transverse(const BoundaryFunction& w) {
    const std::size_t n = w.size();
    if (n < 8) throw Error("too-few-samples", "classification needs at least 8 boundary samples");
    TransverseReport r;
    const auto& th = w.grid->theta();
    auto fail = [&](const char* why) {
        r.reason = why;
        r.increasing_zeros.clear();
        r.decreasing_zeros.clear();
        r.l = 0;
        return r;
    };
    for (std::size_t k = 0; k < n; ++k) {
        double cur = w[k], nxt = w[(k + 1) % n];
        if (cur == 0.0) {
            if (nxt == 0.0) return fail("flat-segment-detected");
            double prev = w[(k + n - 1) % n];
            if ((prev < 0) == (nxt < 0)) return fail("tangential-zero");
            (prev < 0 ? r.increasing_zeros : r.decreasing_zeros).push_back(th[k]);
            continue;
        }
        if (nxt == 0.0 || (cur < 0) == (nxt < 0)) continue;
        double t0 = th[k], t1 = k + 1 < n ? th[k + 1] : kTwoPi;
        double t = t0 + (t1 - t0) * cur / (cur - nxt);
        if (t >= kTwoPi) t -= kTwoPi;
        (cur < 0 ? r.increasing_zeros : r.decreasing_zeros).push_back(t);
    }
    r.is_transverse = r.increasing_zeros.size() == r.decreasing_zeros.size();
    r.l = static_cast<int>(r.increasing_zeros.size());
    return r;
}

nlohmann::json shape_to_json(const Shape& s) {
    if (auto* d = std::get_if<Disc>(&s))
        return {{"type", "disc"}, {"center", {d->cx, d->cy}}, {"radius", d->r}};
    const auto& r = std::get<Rectangle>(s);
    return {{"type", "rectangle"}, {"x0", r.x0}, {"x1", r.x1}, {"y0", r.y0}, {"y1", r.y1}};
}

Shape shape_from_json(const nlohmann::json& j) {
    std::string t = j.at("type").get<std::string>();
    if (t == "disc")
        return Disc{j.at("center").at(0).get<double>(), j.at("center").at(1).get<double>(),
                    j.at("radius").get<double>()};
    if (t == "rectangle")
        return Rectangle{j.at("x0").get<double>(), j.at("x1").get<double>(), j.at("y0").get<double>(),
                         j.at("y1").get<double>()};
    throw Error("invalid-shape-parameters", "unknown shape type '" + t + "'");
}

namespace {

nlohmann::json envelope(const GridDomain& g, const char* kind) {
    return {{"kind", kind}, {"shape", shape_to_json(g.shape())}, {"nx", g.nx()}, {"ny", g.ny()}};
}

GridPtr grid_of(const nlohmann::json& j) {
    return build_grid(shape_from_json(j.at("shape")), j.at("nx").get<int>(), j.at("ny").get<int>());
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

nlohmann::json to_json(const ScalarField& f) {
    nlohmann::json j = envelope(*f.grid, "field");
    nlohmann::json vals = nlohmann::json::array();
    for (std::size_t n = 0; n < f.size(); ++n) {
        if (f.is_valid(n))
            vals.push_back(f.values[n]);
        else
            vals.push_back(nullptr);
    }
    j["values"] = std::move(vals);
    return j;
}

nlohmann::json to_json(const BoundaryFunction& b) {
    nlohmann::json j = envelope(*b.grid, "boundary");
    j["values"] = b.samples;
    return j;
}

ScalarField field_from_json(const nlohmann::json& j) {
    ScalarField f = ScalarField::zeros(grid_of(j));
    const auto& vals = j.at("values");
    if (vals.size() != f.size()) throw Error("size-mismatch", "value count does not match the grid");
    bool any_invalid = false;
    for (std::size_t n = 0; n < f.size(); ++n) any_invalid = any_invalid || vals[n].is_null();
    if (any_invalid) f.valid.assign(f.size(), 1);
    for (std::size_t n = 0; n < f.size(); ++n) {
        if (vals[n].is_null()) {
            f.values[n] = std::numeric_limits<double>::quiet_NaN();
            f.valid[n] = 0;
        } else {
            f.values[n] = vals[n].get<double>();
        }
    }
    return f;
}

BoundaryFunction boundary_from_json(const nlohmann::json& j) {
    BoundaryFunction b{grid_of(j), j.at("values").get<std::vector<double>>()};
    if (b.samples.size() != b.grid->loop().size())
        throw Error("size-mismatch", "sample count does not match the boundary loop");
    return b;
}

std::string to_csv(const ScalarField& f) {
    std::ostringstream os;
    os << "i,j,x,y,value\n";
    for (std::size_t n = 0; n < f.size(); ++n) {
        const Node& p = f.grid->node(n);
        os << p.i << ',' << p.j << ',' << fmt(p.x) << ',' << fmt(p.y) << ','
           << (f.is_valid(n) ? fmt(f.values[n]) : std::string("nan")) << '\n';
    }
    return os.str();
}

std::string to_csv(const BoundaryFunction& b) {
    std::ostringstream os;
    os << "i,j,x,y,value\n";
    for (std::size_t k = 0; k < b.size(); ++k) {
        const Node& p = b.grid->node(b.grid->loop()[k]);
        os << p.i << ',' << p.j << ',' << fmt(p.x) << ',' << fmt(p.y) << ',' << fmt(b.samples[k]) << '\n';
    }
    return os.str();
}

}  // namespace slcr
