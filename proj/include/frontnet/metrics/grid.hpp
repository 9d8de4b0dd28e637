#pragma once

#include "frontnet/problems/problem.hpp"

namespace frontnet::metrics {

// Square evaluation lattice on a 2-d slice of the state space:
// x(a, b) = center + a*w1 + b*w2 with a, b in [-rmax, rmax].
struct ReferenceGrid {
  Vec w1, w2, center;
  double rmax = 0.0;
  int n = 201;  // points per axis

  static ReferenceGrid from_plane(const problems::PlaneDefaults& plane, int n);

  int d() const { return static_cast<int>(center.size()); }
  size_t size() const { return static_cast<size_t>(n) * n; }
  double coord(int i) const { return -rmax + 2.0 * rmax * i / (n - 1); }
  // flat index i*n + j maps to (a_i, b_j)
  void point(int i, int j, double* x) const;
};

}  // namespace frontnet::metrics
