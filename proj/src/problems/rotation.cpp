#include "frontnet/problems/rotation.hpp"

#include <array>
#include <cmath>

namespace frontnet::problems {

namespace {
constexpr double kXA[2] = {1.0, 0.0};
constexpr double kXB[2] = {0.0, 1.0};
constexpr double kTargetRadius = 0.5;
constexpr double kObstacleRadius = 0.25;

double g_at(double px, double py) {
  double dx = px - kXB[0], dy = py - kXB[1];
  return kObstacleRadius - std::sqrt(dx * dx + dy * dy);
}

double phi_at(double px, double py) {
  double dx = px - kXA[0], dy = py - kXA[1];
  return std::sqrt(dx * dx + dy * dy) - kTargetRadius;
}
}  // namespace

Rotation::Rotation()
    : Problem("rotation", 2, 1, 0.4, true, nn::OutputMap::sigmoid_affine(-1.0, 1.0),
              Box{{-2.0, -2.0}, {2.0, 2.0}},
              PlaneDefaults{{1.0, 0.0}, {0.0, 1.0}, {0.0, 0.0}, 2.0}) {}

void Rotation::f(const double* x, const double* a, double* out) const {
  double w = 2.0 * kPi * a[0];
  out[0] = -w * x[1];
  out[1] = w * x[0];
}

double Rotation::g(const double* x) const { return g_at(x[0], x[1]); }

double Rotation::phi(const double* x) const { return phi_at(x[0], x[1]); }

ad::Var Rotation::f(ad::Tape& t, ad::Var x, ad::Var a) const {
  ad::Var x1 = t.element(x, 0);
  ad::Var x2 = t.element(x, 1);
  ad::Var f1 = t.mul_const(t.mul(a, x2), -2.0 * kPi);
  ad::Var f2 = t.mul_const(t.mul(a, x1), 2.0 * kPi);
  std::array<ad::Var, 2> comps{f1, f2};
  return t.pack(comps);
}

ad::Var Rotation::g(ad::Tape& t, ad::Var x) const {
  const double base[2] = {-kXB[0], -kXB[1]};
  std::array<ad::Var, 1> vs{x};
  const double one[1] = {1.0};
  ad::Var diff = t.lincomb(base, vs, one);
  ad::Var r = t.sqrt(t.dot(diff, diff));
  return t.add_const(t.mul_const(r, -1.0), kObstacleRadius);
}

ad::Var Rotation::phi(ad::Tape& t, ad::Var x) const {
  const double base[2] = {-kXA[0], -kXA[1]};
  std::array<ad::Var, 1> vs{x};
  const double one[1] = {1.0};
  ad::Var diff = t.lincomb(base, vs, one);
  ad::Var r = t.sqrt(t.dot(diff, diff));
  return t.add_const(r, -kTargetRadius);
}

void Rotation::set_oracle_samples(int n) {
  if (n < 16) throw config_error("rotation oracle needs at least 16 angle samples");
  samples_ = n;
}

// The angular speed is 2*pi*a with |a| <= 1 and can change sign at will, so in
// time tau the state sweeps a circular arc of any length up to 2*pi*tau in
// either direction. Sweeping past an angle and coming back only adds to the
// running max, hence a monotone sweep to some final angle is optimal. The value
// is the min over direction and arc length of (running max of g) v (g v phi at
// the end point), evaluated on a dense angle grid.
double Rotation::oracle(double t, const double* x) const {
  double tau = T_ - t;
  if (tau < 0.0) throw numeric_error("rotation oracle: t beyond horizon");
  double px = x[0], py = x[1];
  double best = std::max(g_at(px, py), phi_at(px, py));
  if (tau <= 1e-14) return best;

  double sweep = 2.0 * kPi * tau;
  double dtheta = sweep / samples_;
  double cs = std::cos(dtheta), sn = std::sin(dtheta);
  for (int dir = 0; dir < 2; ++dir) {
    double s = dir == 0 ? sn : -sn;
    double cx = px, cy = py;
    double run = g_at(px, py);
    for (int j = 1; j <= samples_; ++j) {
      double nx = cs * cx - s * cy;
      double ny = s * cx + cs * cy;
      cx = nx;
      cy = ny;
      double gv = g_at(cx, cy);
      if (gv > run) run = gv;
      double endv = std::max(run, std::max(gv, phi_at(cx, cy)));
      if (endv < best) best = endv;
    }
  }
  return best;
}

}  // namespace frontnet::problems
