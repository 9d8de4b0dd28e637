#pragma once

#include <optional>

#include "frontnet/common.hpp"

namespace frontnet::problems {

// Wall-with-a-door obstacle in front of a radial target, shared by the
// advection benchmark and its value oracles:
//   g(x)   = min(g_max - c_e*|x1 - g_c|, c_x*|x_perp| + g_min)
//   phi(x) = |x| + alpha_min
// b is the drift magnitude, c the controllable speed. Trajectories drift in
// the -e1 direction, so fronts emitted by the target propagate downstream
// (+e1) toward the wall and squeeze through the door around the x1 axis.
struct WallGeometry {
  double g_max = 2.0;
  double g_min = -2.0;
  double c_e = 1.0;
  double c_x = 1.5;
  double g_c = 4.0;
  double alpha_min = -1.0;
  double b = 1.0;  // drift magnitude
  double c = 0.5;  // control speed

  double g(const double* x, int d) const;
  double phi(const double* x, int d) const;
};

enum class OracleBranch { Straight, TwoSegment, Unreached };

struct EikadvOracleResult {
  double v = 0.0;
  OracleBranch branch = OracleBranch::Straight;
  int newton_iters = 0;
  double residual = 0.0;
};

// Semi-analytical value at time-to-go tau. The straight-segment candidate is
// (|x - b*tau*e1| - c*tau)_+ + alpha_min; when the segment is blocked by the
// wall the value solves a two-leg reachability system bending at the door
// corner, found by Newton iteration on the level v with complex-continued leg
// times. Throws numeric_error when Newton fails to converge.
EikadvOracleResult eikadv_oracle_value(const WallGeometry& geo, double tau,
                                       const double* x, int d);

struct TwoSegmentBruteForce {
  double v = 0.0;
  bool two_segment = false;  // false: straight candidate was feasible
  bool reached = true;
};

// Independent cross-check: discretizes the door edge {g = v} (corner included
// exactly) and bisects on v until the fastest two-leg path takes exactly tau.
TwoSegmentBruteForce eikadv_two_segment_bruteforce(const WallGeometry& geo,
                                                   double tau, const double* x,
                                                   int d, int door_points = 10000);

// Smallest time t >= 0 with |z - b*t*e1| = c*t + w (2-d reduced coordinates),
// i.e. the drift-advected reachable ball around z touches the sphere of
// radius w at the origin. Empty when no real nonnegative root exists.
std::optional<double> reach_time_real(double z1, double z2, double w, double b,
                                      double c);

}  // namespace frontnet::problems
