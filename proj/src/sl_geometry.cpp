#include "slcr/sl_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <ostream>

#include "slcr/error.hpp"

namespace slcr {

C3 cross_product(const C3& r, const C3& s) {
    return {std::conj(r[1] * s[2] - r[2] * s[1]), std::conj(r[2] * s[0] - r[0] * s[2]),
            std::conj(r[0] * s[1] - r[1] * s[0])};
}

double metric_g(const C3& r, const C3& s) {
    cplx h = 0;
    for (int k = 0; k < 3; ++k) h += std::conj(r[k]) * s[k];
    return h.real();
}

double kahler_form(const C3& r, const C3& s) {
    cplx h = 0;
    for (int k = 0; k < 3; ++k) h += std::conj(r[k]) * s[k];
    return h.imag();
}

cplx holomorphic_volume(const C3& r, const C3& s, const C3& t) {
    return r[0] * (s[1] * t[2] - s[2] * t[1]) - r[1] * (s[0] * t[2] - s[2] * t[0]) +
           r[2] * (s[0] * t[1] - s[1] * t[0]);
}

double norm(const C3& r) { return std::sqrt(std::norm(r[0]) + std::norm(r[1]) + std::norm(r[2])); }

Mat3 random_su3(std::mt19937_64& rng) {
    std::normal_distribution<double> nd;
    Mat3 m;
    for (auto& row : m)
        for (auto& e : row) e = {nd(rng), nd(rng)};
    // Gram-Schmidt on the columns.
    for (int c = 0; c < 3; ++c) {
        for (int q = 0; q < c; ++q) {
            cplx dot = 0;
            for (int r = 0; r < 3; ++r) dot += std::conj(m[r][q]) * m[r][c];
            for (int r = 0; r < 3; ++r) m[r][c] -= dot * m[r][q];
        }
        double n = 0;
        for (int r = 0; r < 3; ++r) n += std::norm(m[r][c]);
        n = std::sqrt(n);
        for (int r = 0; r < 3; ++r) m[r][c] /= n;
    }
    C3 c0{m[0][0], m[1][0], m[2][0]}, c1{m[0][1], m[1][1], m[2][1]}, c2{m[0][2], m[1][2], m[2][2]};
    cplx det = holomorphic_volume(c0, c1, c2);
    cplx fix = std::conj(det) / std::abs(det);
    for (int r = 0; r < 3; ++r) m[r][2] *= fix;
    return m;
}

C3 mat_vec(const Mat3& U, const C3& r) {
    C3 out{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) out[i] += U[i][j] * r[j];
    return out;
}

C3 rotate_fibre(const C3& z, double theta) {
    cplx e = std::polar(1.0, theta);
    return {e * z[0], std::conj(e) * z[1], z[2]};
}

LiftedPoint lift_point(double x, double y, double u, double v, double a, double theta) {
    LiftedPoint lp{x, y, theta, a, {}};
    double s = std::sqrt(v * v + y * y + a * a);
    // a + s loses everything to cancellation when a < 0 and |a| >> |v|, |y|.
    double m1 = a >= 0 ? a + s : (v * v + y * y) / (s - a);
    double r1 = std::sqrt(m1);
    cplx w(v, y);
    cplx z1 = std::polar(r1, theta);
    cplx z2 = r1 > 0 ? w / z1 : std::polar(std::sqrt(2 * std::abs(a)), -theta);
    lp.z = {z1, z2, cplx(x, u)};
    return lp;
}

namespace {

// Frame at the representative with z1 > 0, then rotated.
Frame frame_from_derivs(double y, double v, double a, const PairDerivs& d, double theta) {
    double s = std::sqrt(v * v + y * y + a * a);
    double m1 = a >= 0 ? a + s : (v * v + y * y) / (s - a);
    if (!(m1 > 0)) throw Error("singular-fibre", "z1 = 0 on this fibre");
    double r1 = std::sqrt(m1);
    cplx w(v, y);
    cplx z2 = w / r1;
    double r1x = v * d.vx / (2 * s * r1);
    double r1y = (v * d.vy + y) / (2 * s * r1);
    Frame f;
    f.p1 = {cplx(0, r1), cplx(0, -1) * z2, 0};
    f.p2 = {r1x, d.vx / r1 - w * r1x / m1, cplx(1, d.ux)};
    f.p3 = {r1y, cplx(d.vy, 1) / r1 - w * r1y / m1, cplx(0, d.uy)};
    f.p1 = rotate_fibre(f.p1, theta);
    f.p2 = rotate_fibre(f.p2, theta);
    f.p3 = rotate_fibre(f.p3, theta);
    return f;
}

}  // namespace

Frame tangent_frame(const SolutionPair& p, std::size_t node, double theta) {
    auto [ux, uy] = field_gradient(p.u);
    auto [vx, vy] = field_gradient(p.v);
    const Node& n = p.grid()->node(node);
    return frame_from_derivs(n.y, p.v[node], p.a, {ux[node], uy[node], vx[node], vy[node]}, theta);
}

SLReport verify_sl(const SolutionPair& p, int theta_samples) {
    const GridDomain& g = *p.grid();
    auto [ux, uy] = field_gradient(p.u);
    auto [vx, vy] = field_gradient(p.v);
    SLReport rep;
    rep.theta_samples = theta_samples;
    rep.min_re_Omega = std::numeric_limits<double>::infinity();
    for (std::size_t n : g.interior()) {
        bool skip = !p.u.is_valid(n) || !p.v.is_valid(n);
        for (int d = 0; d < 4 && !skip; ++d) {
            std::size_t m = g.neighbor(n, static_cast<Dir>(d));
            if (!g.is_interior(m) || !p.u.is_valid(m) || !p.v.is_valid(m)) skip = true;
        }
        if (skip) continue;
        const Node& nd = g.node(n);
        PairDerivs d{ux[n], uy[n], vx[n], vy[n]};
        for (int t = 0; t < theta_samples; ++t) {
            double theta = 2 * std::numbers::pi * t / theta_samples;
            Frame f;
            try {
                f = frame_from_derivs(nd.y, p.v[n], p.a, d, theta);
            } catch (const Error&) {
                continue;
            }
            double n1 = norm(f.p1), n2 = norm(f.p2), n3 = norm(f.p3);
            rep.max_omega = std::max({rep.max_omega, std::abs(kahler_form(f.p1, f.p2)) / (n1 * n2),
                                      std::abs(kahler_form(f.p1, f.p3)) / (n1 * n3),
                                      std::abs(kahler_form(f.p2, f.p3)) / (n2 * n3)});
            cplx om = holomorphic_volume(f.p1, f.p2, f.p3) / (n1 * n2 * n3);
            rep.max_im_Omega = std::max(rep.max_im_Omega, std::abs(om.imag()));
            rep.min_re_Omega = std::min(rep.min_re_Omega, om.real());
        }
        ++rep.nodes;
    }
    if (rep.nodes == 0) rep.min_re_Omega = 0;
    return rep;
}

nlohmann::json to_json(const SLReport& r) {
    return {{"max_omega", r.max_omega},
            {"max_im_Omega", r.max_im_Omega},
            {"min_re_Omega", r.min_re_Omega},
            {"nodes", r.nodes},
            {"theta_samples", r.theta_samples}};
}

MeshStats write_obj(std::ostream& os, const SolutionPair& p, int theta_samples, const Projection& proj) {
    const GridDomain& g = *p.grid();
    MeshStats st;
    char buf[128];
    for (std::size_t n = 0; n < g.size(); ++n) {
        const Node& nd = g.node(n);
        for (int t = 0; t < theta_samples; ++t) {
            double theta = 2 * std::numbers::pi * t / theta_samples;
            LiftedPoint lp = lift_point(nd.x, nd.y, p.u[n], p.v[n], p.a, theta);
            const double c[6] = {lp.z[0].real(), lp.z[0].imag(), lp.z[1].real(),
                                 lp.z[1].imag(), lp.z[2].real(), lp.z[2].imag()};
            double X = c[proj[0]], Y = c[proj[1]], Z = c[proj[2]];
            if (!std::isfinite(X) || !std::isfinite(Y) || !std::isfinite(Z)) st.finite = false;
            std::snprintf(buf, sizeof buf, "v %.17g %.17g %.17g\n", X, Y, Z);
            os << buf;
            ++st.vertices;
        }
    }
    auto vid = [&](std::size_t n, int t) { return n * theta_samples + (t % theta_samples) + 1; };
    for (std::size_t n = 0; n < g.size(); ++n) {
        for (Dir d : {Dir::E, Dir::N}) {
            std::size_t m = g.neighbor(n, d);
            if (m == GridDomain::npos) continue;
            for (int t = 0; t < theta_samples; ++t) {
                os << "f " << vid(n, t) << ' ' << vid(m, t) << ' ' << vid(m, t + 1) << ' ' << vid(n, t + 1)
                   << '\n';
                ++st.faces;
            }
        }
    }
    return st;
}

MeshStats export_mesh(const std::string& path, const SolutionPair& p, int theta_samples, const Projection& proj) {
    std::ofstream os(path);
    if (!os) throw Error("io-failure", "cannot open " + path);
    MeshStats st = write_obj(os, p, theta_samples, proj);
    os.flush();
    if (!os) throw Error("io-failure", "write failed for " + path);
    return st;
}

}  // namespace slcr
