#include "frontnet/problems/eikonal.hpp"

#include <array>
#include <cmath>

namespace frontnet::problems {

namespace {
constexpr double kRadius = 0.5;

double center_dist(const double* x, int d, double c1) {
  double s = sq(x[0] - c1);
  for (int i = 1; i < d; ++i) s += sq(x[i]);
  return std::sqrt(s);
}

Box make_box(int d) {
  Box b;
  b.lo.assign(d, -3.0);
  b.hi.assign(d, 3.0);
  return b;
}

PlaneDefaults make_plane(int d) {
  PlaneDefaults p;
  p.w1.assign(d, 0.0);
  p.w2.assign(d, 0.0);
  p.w1[0] = 1.0;
  p.w2[1] = 1.0;
  p.center.assign(d, 0.0);
  p.rmax = 3.0;
  return p;
}
}  // namespace

Eikonal::Eikonal(int d)
    : Problem("eikonal", d, d, 1.0, false, nn::OutputMap::ball(1.0), make_box(d),
              make_plane(d)) {
  if (d < 2) throw config_error("eikonal needs d >= 2");
}

void Eikonal::f(const double*, const double* a, double* out) const {
  for (int i = 0; i < d_; ++i) out[i] = a[i];
}

double Eikonal::phi(const double* x) const {
  double d1 = center_dist(x, d_, 1.0);
  double d2 = center_dist(x, d_, -1.0);
  return std::min(d1, d2) - kRadius;
}

ad::Var Eikonal::f(ad::Tape&, ad::Var, ad::Var a) const { return a; }

ad::Var Eikonal::phi(ad::Tape& t, ad::Var x) const {
  std::array<ad::Var, 1> vs{x};
  const double one[1] = {1.0};
  Vec base(d_, 0.0);
  base[0] = -1.0;
  ad::Var da = t.lincomb(base, vs, one);
  ad::Var ra = t.sqrt(t.dot(da, da));
  base[0] = 1.0;
  ad::Var db = t.lincomb(base, vs, one);
  ad::Var rb = t.sqrt(t.dot(db, db));
  return t.add_const(t.min(ra, rb), -kRadius);
}

double Eikonal::oracle(double t, const double* x) const {
  double tau = T_ - t;
  if (tau < 0.0) throw numeric_error("eikonal oracle: t beyond horizon");
  double d1 = center_dist(x, d_, 1.0);
  double d2 = center_dist(x, d_, -1.0);
  double r1 = d1 - tau, r2 = d2 - tau;
  double best = std::min(r1 > 0.0 ? r1 : 0.0, r2 > 0.0 ? r2 : 0.0);
  return best - kRadius;
}

}  // namespace frontnet::problems
