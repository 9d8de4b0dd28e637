#pragma once

#include <span>
#include <vector>

#include "frontnet/dynamics/rollout.hpp"
#include "frontnet/problems/problem.hpp"

namespace frontnet::schemes {

// Exhaustive lower envelope over piecewise-constant controls drawn from a
// fixed grid: V(x) = min over control words of the rolled-out cost. Depth
// first with running-max pruning, so typical calls visit far fewer than
// K^(N-n) words.
double brute_force_value(const dynamics::ButcherTableau& tab,
                         const problems::Problem& prob,
                         std::span<const double> control_grid, int n, int N,
                         double dt, int p, const double* x);

// K evenly spaced scalars covering [lo, hi], endpoints included.
std::vector<double> uniform_scalar_grid(double lo, double hi, int count);

// count unit vectors in R^d: evenly spaced angles for d = 2, otherwise a
// fixed-seed pseudorandom spread on the sphere.
std::vector<double> unit_direction_grid(int d, int count);

}  // namespace frontnet::schemes
