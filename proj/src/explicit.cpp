#include "slcr/explicit.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "slcr/error.hpp"

namespace slcr {

std::pair<double, double> AnalyticPair::eval(double x, double y) const {
    switch (kind) {
        case PairKind::affine:
            return {alpha * x + beta, alpha * y + gamma};
        case PairKind::catenoid: {
            double s = 1.0 / std::cosh(x), c = std::cosh(x);
            return {y * std::tanh(x), 0.5 * y * y * s * s - 0.5 * c * c};
        }
        case PairKind::paraboloid_union:
            return {std::abs(y) - 0.5 * std::cosh(2 * x), -y * std::sinh(2 * x)};
        case PairKind::harvey_lawson:
            return harvey_lawson_eval(a, x, y);
    }
    return {0, 0};
}

PairDerivs AnalyticPair::derivs(double x, double y) const {
    switch (kind) {
        case PairKind::affine:
            return {alpha, 0, 0, alpha};
        case PairKind::catenoid: {
            double s2 = 1.0 / (std::cosh(x) * std::cosh(x)), t = std::tanh(x);
            return {y * s2, t, -y * y * s2 * t - std::cosh(x) * std::sinh(x), y * s2};
        }
        case PairKind::paraboloid_union:
            if (y == 0) throw Error("undefined-derivative", "u_y is not defined on y = 0");
            return {-std::sinh(2 * x), y > 0 ? 1.0 : -1.0, -2 * y * std::cosh(2 * x), -std::sinh(2 * x)};
        case PairKind::harvey_lawson:
            return harvey_lawson_derivs(a, x, y);
    }
    return {0, 0, 0, 0};
}

std::string AnalyticPair::name() const {
    switch (kind) {
        case PairKind::affine: return "affine";
        case PairKind::catenoid: return "catenoid";
        case PairKind::paraboloid_union: return "paraboloid_union";
        case PairKind::harvey_lawson: return "harvey_lawson";
    }
    return "";
}

AnalyticPair affine_pair(double alpha, double beta, double gamma) {
    AnalyticPair p;
    p.kind = PairKind::affine;
    p.alpha = alpha;
    p.beta = beta;
    p.gamma = gamma;
    return p;
}

AnalyticPair catenoid_pair() {
    AnalyticPair p;
    p.kind = PairKind::catenoid;
    return p;
}

AnalyticPair paraboloid_union_pair() {
    AnalyticPair p;
    p.kind = PairKind::paraboloid_union;
    return p;
}

AnalyticPair harvey_lawson_pair(double a) {
    AnalyticPair p;
    p.kind = PairKind::harvey_lawson;
    p.a = std::abs(a);
    return p;
}

std::pair<double, double> analytic_cr_residual(const AnalyticPair& p, double a, double x, double y) {
    auto [u, v] = p.eval(x, y);
    PairDerivs d = p.derivs(x, y);
    return {d.ux - d.vy, d.vx + 2.0 * std::sqrt(v * v + y * y + a * a) * d.uy};
}

double harvey_lawson_cubic(double a, double x, double y, double t) {
    double A = std::abs(a), x2 = x * x;
    double b = 2 * x2 + 2 * A, c = x2 * x2 + 2 * A * x2 - y * y, d = -x2 * y * y;
    return ((t + b) * t + c) * t + d;
}

namespace {

// Largest real root of t^3 + b t^2 + c t + d.
double largest_real_root(double b, double c, double d) {
    double p = c - b * b / 3.0;
    double q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
    double disc = q * q / 4.0 + p * p * p / 27.0;
    double s;
    if (disc < 0 && p < 0) {
        double m = 2.0 * std::sqrt(-p / 3.0);
        double arg = std::clamp(3.0 * q / (p * m), -1.0, 1.0);
        s = m * std::cos(std::acos(arg) / 3.0);
    } else {
        double r = std::sqrt(std::max(disc, 0.0));
        s = std::cbrt(-q / 2.0 + r) + std::cbrt(-q / 2.0 - r);
    }
    return s - b / 3.0;
}

}  // namespace

double harvey_lawson_alpha(double a, double x, double y) {
    const double A = std::abs(a);
    if (y == 0) return 0.0;
    if (x == 0) {
        double r = std::hypot(A, y);
        return y * y / (r + A);
    }
    const long double x2 = static_cast<long double>(x) * x, y2 = static_cast<long double>(y) * y;
    const long double b = 2 * x2 + 2 * A, c = x2 * x2 + 2 * A * x2 - y2, d = -x2 * y2;
    auto P = [&](long double t) { return ((t + b) * t + c) * t + d; };
    auto dP = [&](long double t) { return (3 * t + 2 * b) * t + c; };

    // d < 0 and the cubic has exactly one positive root; bracket it.
    long double t = largest_real_root(static_cast<double>(b), static_cast<double>(c), static_cast<double>(d));
    if (!(t > 0) && c > 0) t = -d / c;
    if (!(t > 0)) t = std::sqrt(static_cast<long double>(std::abs(static_cast<double>(d))));
    long double lo = 0, hi = t;
    while (P(hi) <= 0) hi = hi * 2 + 1e-300L;
    if (P(t) < 0) lo = t;
    for (int it = 0; it < 200; ++it) {
        long double pt = P(t);
        if (pt == 0) return static_cast<double>(t);
        (pt < 0 ? lo : hi) = t;
        long double g = dP(t);
        long double nt = g > 0 ? t - pt / g : 0.5 * (lo + hi);
        if (!(nt > lo && nt < hi)) nt = 0.5 * (lo + hi);
        if (std::abs(nt - t) <= 1e-18L * nt || hi - lo <= 1e-18L * hi) {
            t = nt;
            break;
        }
        t = nt;
    }
    return static_cast<double>(t);
}

std::pair<double, double> harvey_lawson_eval(double a, double x, double y) {
    const double A = std::abs(a);
    double alpha = harvey_lawson_alpha(A, x, y);
    double u = -std::copysign(std::sqrt(alpha), y);
    if (y == 0) return {0.0, x * std::sqrt(x * x + 2 * A)};
    assert(u != 0 || x == 0);
    if (u == 0) return {0.0, 0.0};
    return {u, -y * x / u};
}

PairDerivs harvey_lawson_derivs(double a, double x, double y) {
    const double A = std::abs(a);
    if (x == 0 && y == 0) {
        if (A == 0) throw Error("undefined-derivative", "the a = 0 family is singular at the origin");
        double r = std::sqrt(2 * A);
        return {0.0, -1.0 / r, r, 0.0};
    }
    auto [u, v] = harvey_lawson_eval(A, x, y);
    double W = x * x + u * u;
    // Implicit differentiation of v^2+y^2 = W(W+2|a|), vu + yx = 0.
    double j11 = -4 * u * (W + A), j12 = 2 * v, j21 = v, j22 = u;
    double det = j11 * j22 - j12 * j21;
    auto solve = [&](double r1, double r2) {
        return std::pair<double, double>{(r1 * j22 - j12 * r2) / det, (j11 * r2 - j21 * r1) / det};
    };
    auto [ux, vx] = solve(4 * x * (W + A), -y);
    auto [uy, vy] = solve(-2 * y, -x);
    return {ux, uy, vx, vy};
}

double harvey_lawson_potential(double a, double x, double y) {
    const double A = std::abs(a);
    double base = (std::pow(x * x + 2 * A, 1.5) - std::pow(2 * A, 1.5)) / 3.0;
    if (y == 0) return base;
    auto u = [&](double t) { return harvey_lawson_eval(A, x, t).first; };
    double err = 0;
    double I = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(u, 0.0, y, 12, 1e-12, &err);
    return base + I;
}

double weighted_homogeneity_check(const std::vector<std::array<double, 3>>& samples) {
    double worst = 0;
    for (const auto& [x, y, t] : samples) {
        if (!(t > 0)) throw Error("nonpositive-scale", "scale t must be positive");
        auto [u1, v1] = harvey_lawson_eval(0, x, y);
        auto [u2, v2] = harvey_lawson_eval(0, t * x, t * t * y);
        worst = std::max(worst, std::abs(u2 - t * u1) + std::abs(v2 - t * t * v1));
    }
    return worst;
}

}  // namespace slcr
