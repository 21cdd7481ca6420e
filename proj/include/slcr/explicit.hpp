#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

namespace slcr {

struct PairDerivs {
    double ux, uy, vx, vy;
};

enum class PairKind { affine, catenoid, paraboloid_union, harvey_lawson };

// Closed-form solutions of the nonlinear Cauchy-Riemann system
//   u_x = v_y,  v_x = -2 (v^2 + y^2 + a^2)^{1/2} u_y.
class AnalyticPair {
public:
    PairKind kind = PairKind::affine;
    double alpha = 0, beta = 0, gamma = 0;  // affine coefficients
    double a = 0;                           // Harvey-Lawson level

    std::pair<double, double> eval(double x, double y) const;
    // Throws Error("undefined-derivative") where the pair is not differentiable.
    PairDerivs derivs(double x, double y) const;
    std::string name() const;
};

AnalyticPair affine_pair(double alpha, double beta, double gamma);
AnalyticPair catenoid_pair();
AnalyticPair paraboloid_union_pair();
AnalyticPair harvey_lawson_pair(double a);

// (u_x - v_y, v_x + 2 sqrt(v^2+y^2+a^2) u_y) from analytic derivatives.
std::pair<double, double> analytic_cr_residual(const AnalyticPair& p, double a, double x, double y);

// Admissible root alpha = u^2 of
//   t^3 + (2x^2+2|a|) t^2 + (x^4+2|a|x^2-y^2) t - x^2 y^2 = 0.
double harvey_lawson_alpha(double a, double x, double y);
double harvey_lawson_cubic(double a, double x, double y, double t);
std::pair<double, double> harvey_lawson_eval(double a, double x, double y);
PairDerivs harvey_lawson_derivs(double a, double x, double y);
// f with f_x = v, f_y = u and f(0,0) = 0: closed form along y = 0, then
// adaptive Gauss-Kronrod in y.
double harvey_lawson_potential(double a, double x, double y);

// max |u0(tx,t^2y) - t u0(x,y)| + |v0(tx,t^2y) - t^2 v0(x,y)| over the a=0 family.
double weighted_homogeneity_check(const std::vector<std::array<double, 3>>& samples);

}  // namespace slcr
