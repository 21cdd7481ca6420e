#pragma once

#include <cstddef>
#include <string>
#include <utility>

#include <json.hpp>

#include "slcr/cauchy_riemann.hpp"
#include "slcr/grid.hpp"

namespace slcr {

struct SolverOptions {
    int max_newton_iters = 40;
    double newton_tol = 1e-10;       // sup-norm of the discrete residual
    double damping = 1.0;            // first trial step of each line search
    double linear_solver_tol = 1e-12;  // iterative fallback only
    int continuation_steps = 4;      // levels used when |a| is small
    bool audit_uniqueness = false;   // re-solve from a perturbed guess
    double path_tol = 0.1;           // circulation audit when recovering u from v
};

struct SolveReport {
    bool converged = false;
    int iterations = 0;
    double final_residual = 0;
    double ellipticity_min = 0;
    int continuation_levels = 1;
    double uniqueness_gap = -1;  // < 0 when not audited
    std::string message;
};

nlohmann::json to_json(const SolveReport& r);

// A(y,v) = int_0^v (w^2+y^2+a^2)^{-1/2} dw = asinh(v / sqrt(y^2+a^2)).
double A_coefficient(double y, double v, double a);
// B(y,v) = int_0^v A(y,w) dw.
double B_coefficient(double y, double v, double a);

// Flux-form residuals at interior nodes (zero on the boundary):
//   P(f) = d/dx A(y, f_x) + 2 f_yy
//   Q(v) = d^2/dx^2 A(y, v) + 2 v_yy
ScalarField residual_P(const ScalarField& f, double a);
ScalarField residual_Q(const ScalarField& v, double a);

// Discrete energy sum_edges w_e F_e: P1 elements on the lattice triangles
// with B(y, f_x) taken at the row of each horizontal edge. Its gradient at an
// interior node is -(cell area) * residual_P.
double functional_I(const ScalarField& f, double a);
ScalarField functional_gradient(const ScalarField& f, double a);

// Five-point harmonic extension of boundary data.
ScalarField harmonic_extension(const BoundaryFunction& phi);

// `initial` (optional) supplies interior starting values; boundary values
// always come from phi.
std::pair<ScalarField, SolveReport> solve_dirichlet_f(const GridPtr& domain, const BoundaryFunction& phi,
                                                      double a, const SolverOptions& opts = {},
                                                      const ScalarField* initial = nullptr);
std::pair<SolutionPair, SolveReport> solve_dirichlet_v(const GridPtr& domain, const BoundaryFunction& phi,
                                                       double a, std::size_t anchor,
                                                       const SolverOptions& opts = {},
                                                       const ScalarField* initial = nullptr);

}  // namespace slcr
