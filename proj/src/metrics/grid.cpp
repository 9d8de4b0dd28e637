#include "frontnet/metrics/grid.hpp"

namespace frontnet::metrics {

ReferenceGrid ReferenceGrid::from_plane(const problems::PlaneDefaults& plane,
                                        int n) {
  if (n < 2) throw config_error("grid needs at least 2 points per axis");
  ReferenceGrid g;
  g.w1 = plane.w1;
  g.w2 = plane.w2;
  g.center = plane.center;
  g.rmax = plane.rmax;
  g.n = n;
  if (g.w1.size() != g.center.size() || g.w2.size() != g.center.size())
    throw config_error("plane vectors disagree on dimension");
  return g;
}

void ReferenceGrid::point(int i, int j, double* x) const {
  const double a = coord(i), b = coord(j);
  const int dim = d();
  for (int m = 0; m < dim; ++m) x[m] = center[m] + a * w1[m] + b * w2[m];
}

}  // namespace frontnet::metrics
