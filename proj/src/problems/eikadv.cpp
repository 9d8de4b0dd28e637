#include "frontnet/problems/eikadv.hpp"

#include <array>
#include <cmath>

namespace frontnet::problems {

namespace {
Box make_box(int d) {
  Box b;
  b.lo.assign(d, -4.0);
  b.hi.assign(d, 4.0);
  b.lo[0] = -2.0;
  b.hi[0] = 8.0;
  return b;
}

PlaneDefaults make_plane(int d) {
  PlaneDefaults p;
  p.w1.assign(d, 0.0);
  p.w2.assign(d, 0.0);
  p.w1[0] = 1.0;
  p.w2[1] = 1.0;
  p.center.assign(d, 0.0);
  p.center[0] = 3.0;  // window [-2,8] x [-5,5] around the wall and target
  p.rmax = 5.0;
  return p;
}
}  // namespace

double WallGeometry::g(const double* x, int d) const {
  double wall = g_max - c_e * std::fabs(x[0] - g_c);
  double s = 0.0;
  for (int i = 1; i < d; ++i) s += sq(x[i]);
  double door = c_x * std::sqrt(s) + g_min;
  return std::min(wall, door);
}

double WallGeometry::phi(const double* x, int d) const {
  double s = 0.0;
  for (int i = 0; i < d; ++i) s += sq(x[i]);
  return std::sqrt(s) + alpha_min;
}

EikonalAdvection::EikonalAdvection(int d, DriftRegime regime, double T)
    : Problem(regime == DriftRegime::Large ? "eikadv-large" : "eikadv-small", d, d,
              T, true, nn::OutputMap::ball(1.0), make_box(d), make_plane(d)),
      regime_(regime) {
  if (d < 2) throw config_error("eikadv needs d >= 2");
  if (regime == DriftRegime::Large) {
    geo_.b = 1.0;
    geo_.c = 0.5;
  } else {
    geo_.b = 0.5;
    geo_.c = 1.0;
  }
}

void EikonalAdvection::f(const double*, const double* a, double* out) const {
  out[0] = -geo_.b + geo_.c * a[0];
  for (int i = 1; i < d_; ++i) out[i] = geo_.c * a[i];
}

double EikonalAdvection::g(const double* x) const { return geo_.g(x, d_); }

double EikonalAdvection::phi(const double* x) const { return geo_.phi(x, d_); }

ad::Var EikonalAdvection::f(ad::Tape& t, ad::Var, ad::Var a) const {
  Vec base(d_, 0.0);
  base[0] = -geo_.b;
  std::array<ad::Var, 1> vs{a};
  const double coeff[1] = {geo_.c};
  return t.lincomb(base, vs, coeff);
}

ad::Var EikonalAdvection::g(ad::Tape& t, ad::Var x) const {
  ad::Var x1 = t.element(x, 0);
  ad::Var wall = t.add_const(
      t.mul_const(t.abs(t.add_const(x1, -geo_.g_c)), -geo_.c_e), geo_.g_max);
  std::vector<ad::Var> perp;
  perp.reserve(d_ - 1);
  for (int i = 1; i < d_; ++i) perp.push_back(t.element(x, i));
  ad::Var pv = t.pack(perp);
  ad::Var pr = t.sqrt(t.dot(pv, pv));
  ad::Var door = t.add_const(t.mul_const(pr, geo_.c_x), geo_.g_min);
  return t.min(wall, door);
}

ad::Var EikonalAdvection::phi(ad::Tape& t, ad::Var x) const {
  return t.add_const(t.sqrt(t.dot(x, x)), geo_.alpha_min);
}

double EikonalAdvection::oracle(double t, const double* x) const {
  auto res = oracle_detail(t, x);
  if (res.branch == OracleBranch::Unreached)
    throw numeric_error(
        "eikadv oracle: no feasible route reaches the target level here");
  return res.v;
}

EikadvOracleResult EikonalAdvection::oracle_detail(double t, const double* x) const {
  double tau = T_ - t;
  if (tau < 0.0) throw numeric_error("eikadv oracle: t beyond horizon");
  return eikadv_oracle_value(geo_, tau, x, d_);
}

}  // namespace frontnet::problems
