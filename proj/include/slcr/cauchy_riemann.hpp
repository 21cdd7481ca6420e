#pragma once

#include <cstddef>
#include <string>
#include <utility>

#include <json.hpp>

#include "slcr/explicit.hpp"
#include "slcr/grid.hpp"

namespace slcr {

struct SolutionPair {
    ScalarField u, v;
    double a = 0;
    bool verified = false;
    double verified_tol = 0;

    const GridPtr& grid() const { return u.grid; }
};

SolutionPair sample_pair(GridPtr g, const AnalyticPair& p, double a);

// (u_x - v_y, v_x + 2 sqrt(v^2+y^2+a^2) u_y) at interior nodes; boundary
// nodes, and nodes whose stencil touches an invalid node, are zero and
// flagged invalid.
std::pair<ScalarField, ScalarField> cr_residual(const SolutionPair& p);

struct PathAudit {
    double circulation = 0;  // max circulation density over interior plaquettes, over |form| / diameter
    double path_gap = 0;     // max |row-first - column-first| over |form| * diameter
};

// Integrates the closed form P dx + Q dy (trapezoid along lattice edges)
// from the anchor along a row-first and a column-first spanning tree and
// returns their mean. Throws path-dependence-exceeds-tolerance when the
// relative path gap exceeds tol.
ScalarField integrate_form(const ScalarField& P, const ScalarField& Q, std::size_t anchor, double tol,
                           PathAudit* audit = nullptr);

// f with f_x = v, f_y = u and f(anchor) = 0.
ScalarField potential_from_pair(const SolutionPair& p, std::size_t anchor, double tol = 0.1,
                                PathAudit* audit = nullptr);
// (v_x, v_y) -> (f_y, f_x) pair of a potential.
SolutionPair pair_from_potential(const ScalarField& f, double a);

// u with u_x = v_y, u_y = -1/2 (v^2+y^2+a^2)^{-1/2} v_x and u(anchor) = 0.
ScalarField u_from_v(const ScalarField& v, double a, std::size_t anchor, double tol = 0.1,
                     PathAudit* audit = nullptr);

struct InverseOptions {
    int nx = 0, ny = 0;            // output resolution; 0 keeps the input's
    double det_threshold = 1e-8;   // relative to the largest image triangle
};

// The pair (u', v') with u'(u,v) = x, v'(u,v) = y, resampled on a rectangle
// covering the image by linear interpolation on the image triangulation.
// Nodes outside the image are flagged invalid.
SolutionPair inverse_pair(const SolutionPair& p, const InverseOptions& opts = {});

nlohmann::json to_json(const SolutionPair& p);
SolutionPair pair_from_json(const nlohmann::json& j);
std::string to_csv(const SolutionPair& p);

}  // namespace slcr
