#pragma once

#include <random>
#include <string>

#include "slcr/grid.hpp"

namespace slcr {

enum class PhiTarget { f, v };

// Boundary data by name:
//   affine[:alpha,beta,gamma]  trace of the affine pair (v = alpha y + gamma,
//                              f = alpha xy + beta y + gamma x)
//   hl                         Harvey-Lawson v, or its potential for f
//   harmonic-K                 Re((z - c)^K / R^K) about the bounding-box centre
//   cos-K                      cos(K psi), psi the polar angle about the centre
//   const:C
// Anything else is read as a CSV file of boundary samples in loop order.
// The value is taken from the last column; a non-numeric first row is a header.
BoundaryFunction make_phi(const GridPtr& g, const std::string& name, PhiTarget target, double a);

BoundaryFunction load_phi_csv(const GridPtr& g, const std::string& path);

// amplitude * sum_{k=1..modes} (c_k cos k psi + s_k sin k psi) / k^2 + c_0 with psi
// the polar angle about the centre, coefficients uniform in [-1, 1].
BoundaryFunction random_smooth_phi(const GridPtr& g, std::mt19937_64& rng, int modes = 4, double amplitude = 1.0);

}  // namespace slcr
