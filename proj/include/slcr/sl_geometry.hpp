#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <random>
#include <string>

#include <json.hpp>

#include "slcr/cauchy_riemann.hpp"

namespace slcr {

using cplx = std::complex<double>;
using C3 = std::array<cplx, 3>;
using Mat3 = std::array<std::array<cplx, 3>, 3>;

// (conj(r2 s3 - r3 s2), conj(r3 s1 - r1 s3), conj(r1 s2 - r2 s1))
C3 cross_product(const C3& r, const C3& s);

double metric_g(const C3& r, const C3& s);      // Re sum conj(r_j) s_j
double kahler_form(const C3& r, const C3& s);   // Im sum conj(r_j) s_j
cplx holomorphic_volume(const C3& r, const C3& s, const C3& t);
double norm(const C3& r);

Mat3 random_su3(std::mt19937_64& rng);
C3 mat_vec(const Mat3& U, const C3& r);
// The circle action diag(e^{i theta}, e^{-i theta}, 1).
C3 rotate_fibre(const C3& z, double theta);

struct LiftedPoint {
    double x = 0, y = 0, theta = 0, a = 0;
    C3 z{};
};

// z1 z2 = v + iy, z3 = x + iu, |z1|^2 - |z2|^2 = 2a, arg z1 = theta.
LiftedPoint lift_point(double x, double y, double u, double v, double a, double theta);

struct Frame {
    C3 p1, p2, p3;  // fibre, x and y directions
};

// Tangent frame of the lifted 3-fold at a node, from finite-difference
// derivatives of the pair. Throws singular-fibre where z1 = 0.
Frame tangent_frame(const SolutionPair& p, std::size_t node, double theta);

struct SLReport {
    double max_omega = 0;     // max |omega(p_i, p_j)| / (|p_i||p_j|)
    double max_im_Omega = 0;  // max |Im Omega| / (|p1||p2||p3|)
    double min_re_Omega = 0;
    std::size_t nodes = 0;
    int theta_samples = 0;
};

// Pointwise SL test over interior nodes away from the boundary ring.
SLReport verify_sl(const SolutionPair& p, int theta_samples = 8);
nlohmann::json to_json(const SLReport& r);

// Real coordinates 0..5 = Re z1, Im z1, Re z2, Im z2, Re z3, Im z3.
using Projection = std::array<int, 3>;
constexpr Projection kDefaultProjection{0, 1, 4};

struct MeshStats {
    std::size_t vertices = 0, faces = 0;
    bool finite = true;
};

MeshStats write_obj(std::ostream& os, const SolutionPair& p, int theta_samples,
                    const Projection& proj = kDefaultProjection);
// Throws io-failure when the file cannot be written.
MeshStats export_mesh(const std::string& path, const SolutionPair& p, int theta_samples,
                      const Projection& proj = kDefaultProjection);

}  // namespace slcr
