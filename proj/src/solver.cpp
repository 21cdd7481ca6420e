#include "slcr/solver.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseLU>

#include "slcr/error.hpp"
#include "slcr/kernels.hpp"

namespace slcr {

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Vec = Eigen::VectorXd;
constexpr std::size_t npos = GridDomain::npos;
constexpr std::size_t kDirectLimit = 100000;

double sup(const std::vector<double>& r) {
    double m = 0;
    for (double x : r) m = std::max(m, std::abs(x));
    return m;
}

void check_grid(const GridPtr& domain, const BoundaryFunction& phi) {
    if (!domain) throw Error("grid-mismatch", "no domain");
    const GridDomain& a = *domain;
    const GridDomain& b = *phi.grid;
    bool same = phi.grid == domain ||
                (a.nx() == b.nx() && a.ny() == b.ny() && shape_to_json(a.shape()) == shape_to_json(b.shape()));
    if (!same || phi.size() != a.loop().size())
        throw Error("grid-mismatch", "boundary data lives on a different grid");
}

enum class Eq { P, Q };

// Interior residual of either equation; `cmin` receives the smallest
// ellipticity coefficient seen.
void eval_residual(const GridDomain& g, Eq eq, double a, const std::vector<double>& w, std::vector<double>& R,
                   double* cmin) {
    const double h = g.hx(), k2 = g.hy() * g.hy();
    const auto& in = g.interior();
    R.resize(in.size());
    std::vector<double> p, ys;
    if (cmin) {
        p.reserve(2 * in.size());
        ys.reserve(2 * in.size());
    }
    for (std::size_t m = 0; m < in.size(); ++m) {
        std::size_t n = in[m];
        std::size_t E = g.neighbor(n, Dir::E), W = g.neighbor(n, Dir::W);
        std::size_t N = g.neighbor(n, Dir::N), S = g.neighbor(n, Dir::S);
        double y = g.node(n).y;
        double yy = 2.0 * (w[N] - 2.0 * w[n] + w[S]) / k2;
        if (eq == Eq::P) {
            double pE = (w[E] - w[n]) / h, pW = (w[n] - w[W]) / h;
            R[m] = (A_coefficient(y, pE, a) - A_coefficient(y, pW, a)) / h + yy;
            if (cmin) {
                p.push_back(pE);
                p.push_back(pW);
            }
        } else {
            R[m] = (A_coefficient(y, w[E], a) - 2.0 * A_coefficient(y, w[n], a) + A_coefficient(y, w[W], a)) /
                       (h * h) +
                   yy;
            if (cmin) {
                p.push_back(w[n]);
                p.push_back(w[E]);
            }
        }
        if (cmin) {
            ys.push_back(y);
            ys.push_back(y);
        }
    }
    if (cmin && !p.empty()) {
        std::vector<double> c(p.size());
        kernels::active_kernels().ellipticity(p.data(), ys.data(), a * a, c.data(), p.size());
        *cmin = std::min(*cmin, *std::min_element(c.begin(), c.end()));
    }
}

void eval_jacobian(const GridDomain& g, Eq eq, double a, const std::vector<double>& w, SpMat& J) {
    const double h2 = g.hx() * g.hx(), k2 = g.hy() * g.hy();
    const auto& in = g.interior();
    // Ellipticity at the faces (P) or nodes (Q) of every stencil, batched.
    std::vector<double> arg(3 * in.size()), ys(3 * in.size()), c(3 * in.size());
    for (std::size_t m = 0; m < in.size(); ++m) {
        std::size_t n = in[m];
        std::size_t E = g.neighbor(n, Dir::E), W = g.neighbor(n, Dir::W);
        double y = g.node(n).y;
        if (eq == Eq::P) {
            arg[3 * m] = (w[E] - w[n]) / g.hx();
            arg[3 * m + 1] = (w[n] - w[W]) / g.hx();
            arg[3 * m + 2] = 0;
        } else {
            arg[3 * m] = w[E];
            arg[3 * m + 1] = w[W];
            arg[3 * m + 2] = w[n];
        }
        ys[3 * m] = ys[3 * m + 1] = ys[3 * m + 2] = y;
    }
    kernels::active_kernels().ellipticity(arg.data(), ys.data(), a * a, c.data(), arg.size());

    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(5 * in.size());
    for (std::size_t m = 0; m < in.size(); ++m) {
        std::size_t n = in[m];
        double cE = c[3 * m] / h2, cW = c[3 * m + 1] / h2;
        double diag = eq == Eq::P ? -(cE + cW) : -2.0 * c[3 * m + 2] / h2;
        diag -= 4.0 / k2;
        trip.emplace_back(m, m, diag);
        auto add = [&](std::size_t nb, double val) {
            std::size_t col = g.interior_index(nb);
            if (col != npos) trip.emplace_back(m, col, val);
        };
        add(g.neighbor(n, Dir::E), cE);
        add(g.neighbor(n, Dir::W), cW);
        add(g.neighbor(n, Dir::N), 2.0 / k2);
        add(g.neighbor(n, Dir::S), 2.0 / k2);
    }
    J.resize(in.size(), in.size());
    J.setFromTriplets(trip.begin(), trip.end());
}

class LinearSolver {
public:
    explicit LinearSolver(double tol) : tol_(tol) {}

    Vec solve(const SpMat& J, const Vec& rhs) {
        if (J.rows() <= static_cast<Eigen::Index>(kDirectLimit)) {
            if (!analyzed_) {
                lu_.analyzePattern(J);
                analyzed_ = true;
            }
            lu_.factorize(J);
            if (lu_.info() != Eigen::Success) throw Error("singular-jacobian", "sparse LU failed");
            return lu_.solve(rhs);
        }
        Eigen::BiCGSTAB<SpMat, Eigen::IncompleteLUT<double>> it;
        it.setTolerance(tol_);
        it.compute(J);
        return it.solve(rhs);
    }

private:
    double tol_;
    bool analyzed_ = false;
    Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu_;
};

double boundary_scale(const GridDomain& g) {
    double s = 0;
    for (std::size_t n = 0; n < g.size(); ++n) s = std::max(s, std::abs(g.node(n).y));
    return std::max(s, 1e-3);
}

// Damped Newton with backtracking on the residual sup-norm.
SolveReport newton(const GridDomain& g, Eq eq, double a, std::vector<double>& w, const SolverOptions& opts,
                   int& iters_used) {
    SolveReport rep;
    rep.ellipticity_min = std::numeric_limits<double>::infinity();
    std::vector<double> R, Rt, wt;
    eval_residual(g, eq, a, w, R, &rep.ellipticity_min);
    double r = sup(R);
    LinearSolver lin(opts.linear_solver_tol);
    SpMat J;
    const auto& in = g.interior();
    while (r > opts.newton_tol && iters_used < opts.max_newton_iters) {
        eval_jacobian(g, eq, a, w, J);
        Vec rhs(static_cast<Eigen::Index>(R.size()));
        for (std::size_t m = 0; m < R.size(); ++m) rhs[m] = -R[m];
        Vec d = lin.solve(J, rhs);
        ++iters_used;
        double t = opts.damping;
        bool accepted = false;
        for (int bt = 0; bt < 30; ++bt) {
            wt = w;
            for (std::size_t m = 0; m < in.size(); ++m) wt[in[m]] += t * d[m];
            eval_residual(g, eq, a, wt, Rt, nullptr);
            double rt = sup(Rt);
            if (std::isfinite(rt) && rt < (1.0 - 1e-4 * t) * r) {
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) {
            rep.message = "line search stalled";
            break;
        }
        w.swap(wt);
        eval_residual(g, eq, a, w, R, &rep.ellipticity_min);
        r = sup(R);
    }
    rep.final_residual = r;
    rep.converged = r <= opts.newton_tol;
    if (!rep.converged && rep.message.empty()) rep.message = "iteration limit reached";
    return rep;
}

std::vector<double> initial_values(const GridPtr& domain, const BoundaryFunction& phi, const ScalarField* initial) {
    std::vector<double> w = initial ? initial->values : harmonic_extension(phi).values;
    if (w.size() != domain->size()) throw Error("grid-mismatch", "initial guess lives on a different grid");
    const auto& loop = domain->loop();
    for (std::size_t k = 0; k < loop.size(); ++k) w[loop[k]] = phi[k];
    return w;
}

std::pair<ScalarField, SolveReport> solve_impl(const GridPtr& domain, const BoundaryFunction& phi, double a,
                                               const SolverOptions& opts, const ScalarField* initial, Eq eq) {
    if (a == 0) throw Error("zero-a-rejected", "the Dirichlet problems need a != 0");
    if (!(opts.newton_tol > 0) || !(opts.damping > 0) || opts.damping > 1 || !(opts.linear_solver_tol > 0))
        throw Error("invalid-options", "tolerances must be positive and damping in (0, 1]");
    check_grid(domain, phi);
    const GridDomain& g = *domain;
    std::vector<double> w = initial_values(domain, phi, initial);

    // Continuation in |a| (the equations only see a^2).
    const double target = std::abs(a), a0 = 0.05 * boundary_scale(g);
    std::vector<double> levels;
    if (target < a0 && opts.continuation_steps > 0) {
        int L = opts.continuation_steps;
        for (int k = 0; k < L; ++k) levels.push_back(a0 * std::pow(target / a0, static_cast<double>(k) / L));
    }
    levels.push_back(target);

    int iters = 0;
    SolveReport rep;
    double emin = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < levels.size(); ++k) {
        SolverOptions o = opts;
        rep = newton(g, eq, levels[k], w, o, iters);
        emin = std::min(emin, rep.ellipticity_min);
        if (!rep.converged && k + 1 == levels.size()) break;
    }
    rep.iterations = iters;
    rep.ellipticity_min = emin;
    rep.continuation_levels = static_cast<int>(levels.size());

    ScalarField f = ScalarField::zeros(domain);
    f.values = std::move(w);

    if (opts.audit_uniqueness && rep.converged) {
        ScalarField alt = harmonic_extension(phi);
        double amp = 0.1 * std::max(1.0, sup(phi.samples));
        auto [cx, cy] = g.center();
        for (std::size_t n : g.interior())
            alt[n] += amp * std::cos(3.0 * (g.node(n).x - cx)) * std::sin(2.0 * (g.node(n).y - cy) + 0.3);
        SolverOptions o = opts;
        o.audit_uniqueness = false;
        auto [f2, rep2] = solve_impl(domain, phi, a, o, &alt, eq);
        double gap = 0;
        for (std::size_t n = 0; n < g.size(); ++n) gap = std::max(gap, std::abs(f2[n] - f[n]));
        rep.uniqueness_gap = rep2.converged ? gap : std::numeric_limits<double>::infinity();
    }
    return {std::move(f), rep};
}

}  // namespace

nlohmann::json to_json(const SolveReport& r) {
    nlohmann::json j = {{"converged", r.converged},
                        {"iterations", r.iterations},
                        {"final_residual", r.final_residual},
                        {"ellipticity_min", r.ellipticity_min},
                        {"continuation_levels", r.continuation_levels},
                        {"message", r.message}};
    if (r.uniqueness_gap >= 0) j["uniqueness_gap"] = r.uniqueness_gap;
    return j;
}

double A_coefficient(double y, double v, double a) {
    if (y == 0 && a == 0) throw Error("undefined-coefficient", "A is undefined when y = a = 0");
    return std::asinh(v / std::hypot(y, a));
}

double B_coefficient(double y, double v, double a) {
    double c = std::hypot(y, a);
    if (c == 0) throw Error("undefined-coefficient", "B is undefined when y = a = 0");
    double s = std::sqrt(v * v + c * c);
    return v * std::asinh(v / c) - v * v / (s + c);
}

ScalarField residual_P(const ScalarField& f, double a) {
    ScalarField r = ScalarField::zeros(f.grid);
    std::vector<double> R;
    eval_residual(*f.grid, Eq::P, a, f.values, R, nullptr);
    for (std::size_t m = 0; m < R.size(); ++m) r[f.grid->interior()[m]] = R[m];
    return r;
}

ScalarField residual_Q(const ScalarField& v, double a) {
    ScalarField r = ScalarField::zeros(v.grid);
    std::vector<double> R;
    eval_residual(*v.grid, Eq::Q, a, v.values, R, nullptr);
    for (std::size_t m = 0; m < R.size(); ++m) r[v.grid->interior()[m]] = R[m];
    return r;
}

namespace {

// Each lattice triangle has one horizontal and one vertical leg; it lends
// half a cell of area to each.
template <class Fn>
void for_each_edge(const GridDomain& g, Fn&& fn) {
    const double half = 0.5 * g.cell_area();
    for (const auto& t : g.triangles()) {
        for (int e = 0; e < 3; ++e) {
            std::size_t p = t[e], q = t[(e + 1) % 3];
            const Node& np = g.node(p);
            const Node& nq = g.node(q);
            if (np.j == nq.j)
                fn(np.i < nq.i ? p : q, np.i < nq.i ? q : p, true, half);
            else if (np.i == nq.i)
                fn(np.j < nq.j ? p : q, np.j < nq.j ? q : p, false, half);
        }
    }
}

}  // namespace

double functional_I(const ScalarField& f, double a) {
    const GridDomain& g = *f.grid;
    double I = 0;
    for_each_edge(g, [&](std::size_t lo, std::size_t hi, bool horiz, double w) {
        if (horiz) {
            double p = (f[hi] - f[lo]) / g.hx();
            I += w * B_coefficient(g.node(lo).y, p, a);
        } else {
            double q = (f[hi] - f[lo]) / g.hy();
            I += w * q * q;
        }
    });
    return I;
}

ScalarField functional_gradient(const ScalarField& f, double a) {
    const GridDomain& g = *f.grid;
    ScalarField grad = ScalarField::zeros(f.grid);
    for_each_edge(g, [&](std::size_t lo, std::size_t hi, bool horiz, double w) {
        double flux;
        if (horiz)
            flux = w * A_coefficient(g.node(lo).y, (f[hi] - f[lo]) / g.hx(), a) / g.hx();
        else
            flux = w * 2.0 * (f[hi] - f[lo]) / (g.hy() * g.hy());
        grad[hi] += flux;
        grad[lo] -= flux;
    });
    return grad;
}

ScalarField harmonic_extension(const BoundaryFunction& phi) {
    const GridDomain& g = *phi.grid;
    ScalarField w = ScalarField::zeros(phi.grid);
    const auto& loop = g.loop();
    for (std::size_t k = 0; k < loop.size(); ++k) w[loop[k]] = phi[k];
    const auto& in = g.interior();
    const double ih2 = 1.0 / (g.hx() * g.hx()), ik2 = 1.0 / (g.hy() * g.hy());
    std::vector<Eigen::Triplet<double>> trip;
    Vec rhs = Vec::Zero(static_cast<Eigen::Index>(in.size()));
    for (std::size_t m = 0; m < in.size(); ++m) {
        std::size_t n = in[m];
        trip.emplace_back(m, m, -2.0 * (ih2 + ik2));
        for (int d = 0; d < 4; ++d) {
            std::size_t nb = g.neighbor(n, static_cast<Dir>(d));
            double c = d < 2 ? ih2 : ik2;
            std::size_t col = g.interior_index(nb);
            if (col != npos)
                trip.emplace_back(m, col, c);
            else
                rhs[m] -= c * w[nb];
        }
    }
    SpMat L(in.size(), in.size());
    L.setFromTriplets(trip.begin(), trip.end());
    LinearSolver lin(1e-12);
    Vec x = lin.solve(L, rhs);
    for (std::size_t m = 0; m < in.size(); ++m) w[in[m]] = x[m];
    return w;
}

std::pair<ScalarField, SolveReport> solve_dirichlet_f(const GridPtr& domain, const BoundaryFunction& phi, double a,
                                                      const SolverOptions& opts, const ScalarField* initial) {
    return solve_impl(domain, phi, a, opts, initial, Eq::P);
}

std::pair<SolutionPair, SolveReport> solve_dirichlet_v(const GridPtr& domain, const BoundaryFunction& phi, double a,
                                                       std::size_t anchor, const SolverOptions& opts,
                                                       const ScalarField* initial) {
    auto [v, rep] = solve_impl(domain, phi, a, opts, initial, Eq::Q);
    SolutionPair p;
    p.a = a;
    p.u = u_from_v(v, a, anchor, rep.converged ? opts.path_tol : std::numeric_limits<double>::infinity());
    p.v = std::move(v);
    p.verified = rep.converged;
    if (p.verified) {
        auto [r1, r2] = cr_residual(p);
        double worst = 0;
        for (std::size_t n : domain->interior()) worst = std::max({worst, std::abs(r1[n]), std::abs(r2[n])});
        p.verified_tol = worst;
    }
    return {std::move(p), rep};
}

}  // namespace slcr
