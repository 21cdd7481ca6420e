// slcr: command-line driver for the solvers, audits and exports.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "slcr/cauchy_riemann.hpp"
#include "slcr/error.hpp"
#include "slcr/explicit.hpp"
#include "slcr/phi.hpp"
#include "slcr/sl_geometry.hpp"
#include "slcr/solver.hpp"
#include "slcr/validation.hpp"
#include "slcr/winding.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace slcr;

namespace {

enum Exit { kOk = 0, kFailed = 1, kBadInput = 2 };

struct DomainArgs {
    std::string shape = "disc";
    double cx = 0, cy = 0, r = 1;
    double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    int nx = 65, ny = 65;

    void add(CLI::App* app) {
        app->add_option("--shape", shape, "disc or rectangle")->check(CLI::IsMember({"disc", "rectangle"}));
        app->add_option("--nx", nx, "lattice points along x");
        app->add_option("--ny", ny, "lattice points along y");
        app->add_option("--cx", cx, "disc centre x");
        app->add_option("--cy", cy, "disc centre y");
        app->add_option("--radius", r, "disc radius");
        app->add_option("--x0", x0);
        app->add_option("--x1", x1);
        app->add_option("--y0", y0);
        app->add_option("--y1", y1);
    }

    GridPtr build() const {
        if (shape == "disc") return build_grid(Disc{cx, cy, r}, nx, ny);
        return build_grid(Rectangle{x0, x1, y0, y1}, nx, ny);
    }
};

std::string default_dir() {
    const char* env = std::getenv("SLCR_OUT_DIR");
    return env && *env ? env : ".";
}

std::string resolve(const std::string& path, const std::string& fallback) {
    std::string p = path.empty() ? (fs::path(default_dir()) / fallback).string() : path;
    fs::path parent = fs::path(p).parent_path();
    if (!parent.empty()) fs::create_directories(parent);
    return p;
}

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error("io-failure", "cannot open " + path);
    os << text;
    if (!os) throw Error("io-failure", "write failed for " + path);
}

void write_json(const std::string& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("io-failure", "cannot read " + path);
    return json::parse(in);
}

std::size_t pick_anchor(const GridDomain& g, const std::vector<double>& at) {
    return at.size() == 2 ? nearest_node(g, at[0], at[1]) : center_node(g);
}

SolverOptions solver_options(int iters, double tol) {
    SolverOptions o;
    o.max_newton_iters = iters;
    o.newton_tol = tol;
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Nonlinear Cauchy-Riemann solvers and special Lagrangian lifts"};
    app.require_subcommand(1);
    std::uint64_t seed = 20240601;
    app.add_option("--seed", seed, "seed for randomized suites")->capture_default_str();

    // solve-f / solve-v
    DomainArgs dom;
    double a = 1;
    std::string phi_name = "hl", out, report;
    std::vector<double> anchor;
    int iters = 40;
    double tol = 1e-10;
    bool audit = false;
    auto add_solve = [&](const std::string& name, const std::string& desc) {
        CLI::App* c = app.add_subcommand(name, desc);
        dom.add(c);
        c->add_option("--a", a, "fibre level, nonzero");
        c->add_option("--phi", phi_name, "boundary data: affine[:al,be,ga], hl, harmonic-K, cos-K, const:C or a CSV file");
        c->add_option("--out", out, "solution file (.json or .csv)");
        c->add_option("--report", report, "solve report (JSON)");
        c->add_option("--max-iters", iters);
        c->add_option("--newton-tol", tol);
        c->add_flag("--audit-uniqueness", audit, "re-solve from a perturbed guess");
        return c;
    };
    CLI::App* solve_f = add_solve("solve-f", "Dirichlet problem for the potential f");
    CLI::App* solve_v = add_solve("solve-v", "Dirichlet problem for v, then u from v");
    solve_v->add_option("--anchor", anchor, "x y of the node where u vanishes")->expected(2);

    // eval-family
    CLI::App* eval = app.add_subcommand("eval-family", "sample an explicit solution family");
    DomainArgs edom;
    edom.add(eval);
    std::string family = "hl";
    double al = 1, be = 0, ga = 0, ea = 0;
    std::string eout;
    eval->add_option("--family", family)->check(CLI::IsMember({"affine", "catenoid", "paraboloid", "hl"}));
    eval->add_option("--a", ea);
    eval->add_option("--alpha", al);
    eval->add_option("--beta", be);
    eval->add_option("--gamma", ga);
    eval->add_option("--out", eout, "CSV table i,j,x,y,u,v");

    // wind
    CLI::App* wind = app.add_subcommand("wind", "zeros and winding of the difference of two pairs");
    std::string p1_path, p2_path, wout;
    bool fit = false;
    wind->add_option("--pair1", p1_path)->required();
    wind->add_option("--pair2", p2_path)->required();
    wind->add_option("--out", wout);
    wind->add_flag("--fit", fit, "fit the local model at each interior zero");

    // lift
    CLI::App* lift = app.add_subcommand("lift", "special Lagrangian check and OBJ export of a pair");
    std::string lpair, lobj, lout;
    int thetas = 16;
    std::vector<int> proj{0, 1, 4};
    lift->add_option("--pair", lpair)->required();
    lift->add_option("--theta-samples", thetas);
    lift->add_option("--obj", lobj, "OBJ mesh path");
    lift->add_option("--projection", proj, "three of Re z1, Im z1, Re z2, Im z2, Re z3, Im z3 (0..5)")
        ->expected(3)
        ->check(CLI::Range(0, 5));
    lift->add_option("--out", lout, "SL report (JSON)");

    // validate
    CLI::App* validate = app.add_subcommand("validate", "run the invariant suite");
    bool quick = false;
    std::string vout;
    std::vector<int> only;
    validate->add_flag("--quick", quick, "reduced suite");
    validate->add_option("--only", only, "check ids to run");
    validate->add_option("--out", vout, "output directory for scorecard.json");

    // convergence
    CLI::App* conv = app.add_subcommand("convergence", "h-refinement ladder against the Harvey-Lawson family");
    std::string problem = "v", cout_path;
    std::vector<int> ladder{33, 65, 129};
    double ca = 1;
    conv->add_option("--problem", problem)->check(CLI::IsMember({"v", "f"}));
    conv->add_option("--ladder", ladder);
    conv->add_option("--a", ca);
    conv->add_option("--out", cout_path);

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve_f->parsed() || solve_v->parsed()) {
            bool is_v = solve_v->parsed();
            GridPtr g = dom.build();
            if (a == 0) throw Error("zero-a-rejected", "the Dirichlet problems need a != 0");
            BoundaryFunction phi = make_phi(g, phi_name, is_v ? PhiTarget::v : PhiTarget::f, a);
            SolverOptions so = solver_options(iters, tol);
            so.audit_uniqueness = audit;
            SolveReport rep;
            std::string path = resolve(out, is_v ? "pair.json" : "f.json");
            if (is_v) {
                auto [p, r] = solve_dirichlet_v(g, phi, a, pick_anchor(*g, anchor), so);
                rep = r;
                if (ends_with(path, ".csv")) write_text(path, to_csv(p));
                else write_json(path, to_json(p));
            } else {
                auto [f, r] = solve_dirichlet_f(g, phi, a, so);
                rep = r;
                if (ends_with(path, ".csv")) write_text(path, to_csv(f));
                else write_json(path, to_json(f));
            }
            write_json(resolve(report, is_v ? "solve_v_report.json" : "solve_f_report.json"), to_json(rep));
            std::cerr << (rep.converged ? "converged" : "not converged") << " in " << rep.iterations
                      << " iterations, residual " << rep.final_residual << "\n";
            return rep.converged ? kOk : kFailed;
        }
        if (eval->parsed()) {
            GridPtr g = edom.build();
            AnalyticPair p = family == "affine"     ? affine_pair(al, be, ga)
                             : family == "catenoid" ? catenoid_pair()
                             : family == "paraboloid" ? paraboloid_union_pair()
                                                      : harvey_lawson_pair(ea);
            write_text(resolve(eout, "family.csv"), to_csv(sample_pair(g, p, ea)));
            return kOk;
        }
        if (wind->parsed()) {
            SolutionPair p1 = pair_from_json(read_json(p1_path));
            SolutionPair p2 = pair_from_json(read_json(p2_path));
            WindingReport rep = find_zeros(p1, p2);
            if (fit) {
                for (auto& z : rep.zeros) {
                    if (z.on_boundary) continue;
                    try {
                        LocalModel lm = fit_local_model(p1, p2, z);
                        z.C = lm.C;
                        z.lambda = lm.lambda;
                    } catch (const Error&) {
                    }
                }
            }
            auto audit_json = [](const CountAudit& c) {
                json a = {{"l", c.l}, {"count", c.count}, {"passed", c.bound_passed}};
                if (c.k_df) {
                    a["k_df"] = *c.k_df;
                    a["winding_passed"] = c.winding_passed;
                }
                return a;
            };
            json bounds = {{"morse_bound", nullptr}, {"transverse_bound", nullptr}};
            try {
                CountAudit t = audit_count_transverse(p1, p2, rep);
                rep.l = t.l;
                bounds["transverse_bound"] = audit_json(t);
            } catch (const Error&) {
            }
            try {
                std::size_t anchor = center_node(*p1.grid());
                auto phi1 = BoundaryFunction::trace(potential_from_pair(p1, anchor));
                auto phi2 = BoundaryFunction::trace(potential_from_pair(p2, anchor));
                bounds["morse_bound"] = audit_json(audit_count_morse(phi1, phi2, rep));
            } catch (const Error&) {
            }
            json j = to_json(rep);
            j["bounds"] = bounds;
            write_json(resolve(wout, "winding.json"), j);
            return kOk;
        }
        if (lift->parsed()) {
            SolutionPair p = pair_from_json(read_json(lpair));
            SLReport rep = verify_sl(p, thetas);
            json j = to_json(rep);
            if (!lobj.empty()) {
                MeshStats ms = export_mesh(resolve(lobj, "lift.obj"), p, thetas, {proj[0], proj[1], proj[2]});
                j["mesh"] = {{"vertices", ms.vertices}, {"faces", ms.faces}, {"finite", ms.finite}};
            }
            write_json(resolve(lout, "sl_report.json"), j);
            return kOk;
        }
        if (validate->parsed()) {
            ValidationOptions vo;
            vo.quick = quick;
            vo.seed = seed;
            vo.only = only;
            auto results = run_validation(vo);
            json card = scorecard(results);
            card["quick"] = quick;
            card["seed"] = seed;
            std::string dir = vout.empty() ? default_dir() : vout;
            fs::create_directories(dir);
            write_json((fs::path(dir) / "scorecard.json").string(), card);
            for (const auto& r : results)
                std::printf("%-4d %-36s %s\n", r.id, r.name.c_str(), r.passed ? "pass" : "FAIL");
            return card["passed"].get<bool>() ? kOk : kFailed;
        }
        if (conv->parsed()) {
            if (ca == 0) throw Error("zero-a-rejected", "the Dirichlet problems need a != 0");
            json rows = json::array();
            std::vector<double> errs;
            bool ok = true;
            for (int n : ladder) {
                GridPtr g = build_grid(Disc{0, 0, 1}, n, n);
                double e = 0;
                SolveReport rep;
                if (problem == "v") {
                    auto [p, r] = solve_dirichlet_v(g, make_phi(g, "hl", PhiTarget::v, ca), ca, center_node(*g));
                    rep = r;
                    for (std::size_t m : g->interior()) {
                        const Node& nd = g->node(m);
                        e = std::max(e, std::abs(p.v[m] - harvey_lawson_eval(ca, nd.x, nd.y).second));
                    }
                } else {
                    auto [f, r] = solve_dirichlet_f(g, make_phi(g, "hl", PhiTarget::f, ca), ca);
                    rep = r;
                    for (std::size_t m : g->interior()) {
                        const Node& nd = g->node(m);
                        e = std::max(e, std::abs(f[m] - harvey_lawson_potential(ca, nd.x, nd.y)));
                    }
                }
                ok = ok && rep.converged;
                errs.push_back(e);
                rows.push_back({{"nx", n}, {"h", 2.0 / (n - 1)}, {"sup_error", e}, {"iterations", rep.iterations}});
            }
            json j = {{"problem", problem}, {"a", ca}, {"levels", rows}, {"orders", observed_orders(errs)}};
            write_json(resolve(cout_path, "convergence.json"), j);
            return ok ? kOk : kFailed;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kBadInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kBadInput;
    }
    return kOk;
}
