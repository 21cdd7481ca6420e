#pragma once

#include <complex>
#include <optional>
#include <utility>
#include <vector>

#include <json.hpp>

#include "slcr/cauchy_riemann.hpp"

namespace slcr {

struct ZeroRecord {
    double x = 0, y = 0;
    int k = 1;
    bool on_boundary = false;
    std::optional<std::complex<double>> C;
    std::optional<double> lambda;
};

struct WindingReport {
    std::optional<int> boundary_winding;  // unset when the difference vanishes on the loop
    std::vector<ZeroRecord> zeros;
    int interior_sum = 0;
    int m = 0;  // boundary zeros
    std::optional<int> l;
};

// Degree of a closed loop in R^2 \ {0}. Throws zero-on-loop or
// inadequate-sampling (a step subtending >= pi).
int winding_number(const std::vector<std::pair<double, double>>& loop);

// Zeros of (u1-u2, v1-v2) from the piecewise-linear interpolant on the grid
// triangulation, merged within two cells, with multiplicity from the winding
// on a small circle.
WindingReport find_zeros(const SolutionPair& p1, const SolutionPair& p2);

struct LocalModel {
    int k = 0;
    std::complex<double> C;
    double lambda = 0;
    double residual = 0;  // relative l2 misfit on the ring
};

// lambda (u1-u2) + i (v1-v2) ~ C (lambda (x-b) + i (y-c))^k, fitted by least
// squares on the ring inner..outer cells around the zero.
LocalModel fit_local_model(const SolutionPair& p1, const SolutionPair& p2, const ZeroRecord& zero,
                           double inner_cells = 3, double outer_cells = 6);

struct CountAudit {
    int l = 0;
    int count = 0;               // sum k_i + m
    std::optional<int> k_df;     // winding of d(f1-f2) on the loop (Morse audit)
    bool bound_passed = false;   // sum k_i + m <= l-1 (Morse) or <= l (transverse)
    bool winding_passed = true;  // 1-l <= k_df <= 1+l when k_df is defined
    bool passed() const { return bound_passed && winding_passed; }
};

// phi1, phi2 are the boundary data of the two potentials whose gradient
// pairs produced `report`.
CountAudit audit_count_morse(const BoundaryFunction& phi1, const BoundaryFunction& phi2,
                             const WindingReport& report);
CountAudit audit_count_transverse(const SolutionPair& p1, const SolutionPair& p2, const WindingReport& report);

// Image of the derivative data (p^0, q^0) under the involution that swaps
// (x, y) with (u, v).
std::pair<double, double> forbidden_data_transform(double u_hat, double v_hat, double y_hat, double p_hat,
                                                   double q_hat, double a);

nlohmann::json to_json(const WindingReport& r);

}  // namespace slcr
