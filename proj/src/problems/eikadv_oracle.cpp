#include "frontnet/problems/eikadv_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <limits>
#include <vector>

namespace frontnet::problems {

namespace {
using cplx = std::complex<double>;
constexpr double kInf = std::numeric_limits<double>::infinity();

struct Reduced {
  double x1, rho;  // (x1, |x_perp|); the corner sits on the +rho side
};

Reduced reduce(const double* x, int d) {
  double s = 0.0;
  for (int i = 1; i < d; ++i) s += sq(x[i]);
  return {x[0], std::sqrt(s)};
}

double g_reduced(const WallGeometry& geo, double x1, double rho) {
  double wall = geo.g_max - geo.c_e * std::fabs(x1 - geo.g_c);
  double door = geo.c_x * std::fabs(rho) + geo.g_min;
  return std::min(wall, door);
}

// Exact max of g along the straight segment P0 -> P1. Both coordinates are
// affine in the parameter and g is a min of two piecewise-linear functions,
// so the max sits at an endpoint, at a kink, or where the two pieces cross.
double segment_g_max(const WallGeometry& geo, Reduced P0, Reduced P1) {
  double dx = P1.x1 - P0.x1, dr = P1.rho - P0.rho;
  double cand[8];
  int nc = 0;
  cand[nc++] = 0.0;
  cand[nc++] = 1.0;
  if (dx != 0.0) {
    double s = (geo.g_c - P0.x1) / dx;  // wall kink
    if (s > 0.0 && s < 1.0) cand[nc++] = s;
  }
  if (dr != 0.0) {
    double s = -P0.rho / dr;  // rho sign change
    if (s > 0.0 && s < 1.0) cand[nc++] = s;
  }
  std::sort(cand, cand + nc);

  double best = -kInf;
  auto eval = [&](double s) {
    double v = g_reduced(geo, P0.x1 + s * dx, P0.rho + s * dr);
    if (v > best) best = v;
  };
  for (int i = 0; i < nc; ++i) eval(cand[i]);
  // crossings of the two affine pieces inside each subinterval
  for (int i = 0; i + 1 < nc; ++i) {
    double sa = cand[i], sb = cand[i + 1];
    if (sb - sa < 1e-15) continue;
    double sm = 0.5 * (sa + sb);
    double x1m = P0.x1 + sm * dx, rhom = P0.rho + sm * dr;
    // piece slopes at the midpoint determine the affine forms on (sa,sb)
    double sgn_x = x1m >= geo.g_c ? 1.0 : -1.0;
    double sgn_r = rhom >= 0.0 ? 1.0 : -1.0;
    // u(s) = g_max - c_e*sgn_x*(x1(s)-g_c), w(s) = c_x*sgn_r*rho(s) + g_min
    double u0 = geo.g_max - geo.c_e * sgn_x * (P0.x1 - geo.g_c);
    double du = -geo.c_e * sgn_x * dx;
    double w0 = geo.c_x * sgn_r * P0.rho + geo.g_min;
    double dw = geo.c_x * sgn_r * dr;
    if (du != dw) {
      double s = (w0 - u0) / (du - dw);
      if (s > sa && s < sb) eval(s);
    }
  }
  return best;
}

struct StraightCandidate {
  double v_free;
  Reduced endpoint;
  bool blocked;
  double seg_max;
};

StraightCandidate straight_candidate(const WallGeometry& geo, double tau,
                                     Reduced P) {
  double z1 = P.x1 - geo.b * tau;
  double D = std::sqrt(z1 * z1 + P.rho * P.rho);
  double w = std::max(D - geo.c * tau, 0.0);
  StraightCandidate sc;
  sc.v_free = w + geo.alpha_min;
  if (D > 0.0)
    sc.endpoint = {w * z1 / D, w * P.rho / D};
  else
    sc.endpoint = {0.0, 0.0};
  sc.seg_max = segment_g_max(geo, P, sc.endpoint);
  sc.blocked = sc.seg_max > sc.v_free + 1e-12;
  return sc;
}

// Complex-continued smallest root of (b^2-c^2) t^2 - 2(b z1 + c w) t
// + (z1^2 + z2^2 - w^2) = 0, the time for the drifting ball around z to touch
// the origin-centered sphere of radius w. dt, when requested, is the
// derivative along given dz1, dz2, dw.
cplx reach_time_cplx(cplx z1, cplx z2, cplx w, double b, double c, cplx dz1,
                     cplx dz2, cplx dw, cplx* dt) {
  double q = b * b - c * c;
  cplx s = b * z1 + c * w;
  cplx C = z1 * z1 + z2 * z2 - w * w;
  cplx ds = b * dz1 + c * dw;
  cplx dC = 2.0 * z1 * dz1 + 2.0 * z2 * dz2 - 2.0 * w * dw;
  if (std::fabs(q) < 1e-14) {
    cplx t = C / (2.0 * s);
    if (dt) *dt = (dC * 2.0 * s - 2.0 * ds * C) / (4.0 * s * s);
    return t;
  }
  cplx disc = s * s - q * C;
  cplx r = std::sqrt(disc);
  cplx t = (s - r) / q;
  if (dt) {
    cplx ddisc = 2.0 * s * ds - q * dC;
    cplx dr = std::abs(r) > 1e-12 ? ddisc / (2.0 * r) : cplx(0.0, 0.0);
    *dt = (ds - dr) / q;
  }
  return t;
}
}  // namespace

std::optional<double> reach_time_real(double z1, double z2, double w, double b,
                                      double c) {
  double C = z1 * z1 + z2 * z2 - w * w;
  if (C <= 0.0) return 0.0;  // already touching
  double q = b * b - c * c;
  double s = b * z1 + c * w;
  if (std::fabs(q) < 1e-14) {
    if (s <= 0.0) return std::nullopt;
    return C / (2.0 * s);
  }
  double disc = s * s - q * C;
  if (disc < 0.0) return std::nullopt;
  double r = std::sqrt(disc);
  double ta = (s - r) / q, tb = (s + r) / q;
  if (ta > tb) std::swap(ta, tb);
  if (ta >= -1e-12) return std::max(ta, 0.0);
  if (tb >= -1e-12) return std::max(tb, 0.0);
  return std::nullopt;
}

EikadvOracleResult eikadv_oracle_value(const WallGeometry& geo, double tau,
                                       const double* x, int d) {
  Reduced P = reduce(x, d);
  EikadvOracleResult res;
  if (tau <= 1e-14) {
    res.v = std::max(g_reduced(geo, P.x1, P.rho), geo.phi(x, d));
    res.branch = OracleBranch::Straight;
    return res;
  }

  StraightCandidate sc = straight_candidate(geo, tau, P);
  if (!sc.blocked) {
    res.v = sc.v_free;
    res.branch = OracleBranch::Straight;
    return res;
  }

  // Bent value. At level v the forbidden set is the rectangle
  //   [g_c - width(v), g_c + width(v)] x [rho_c(v), inf),
  // width = (g_max - v)/c_e, rho_c = (v - g_min)/c_x, and a taut detour bends
  // only at its exposed corners cu = (g_c - width, rho_c) (target side) and
  // cd = (g_c + width, rho_c) (far side). Depending on where x sits, the
  // route is x->cu->sphere, x->cd->sphere, or x->cd->cu->sphere, with the
  // sphere {phi = v} of radius v - alpha_min around the origin. Newton solves
  // total time = tau for each route on the level v, leg times continued to
  // complex values where a leg cannot be realized; a converged root counts
  // only if v is real, every leg time is real and nonnegative, and every leg
  // stays inside {g <= max(v, g(x))} (a path may move freely below the
  // running max it already pays at x).
  const double gx = g_reduced(geo, P.x1, P.rho);
  const double dy1 = 1.0 / geo.c_e;
  const double dyr = 1.0 / geo.c_x;

  struct RouteFit {
    bool converged = false, valid = false;
    double v = kInf;
    int iters = 0;
    double resid = kInf;
    double slope = 0.0;  // d(total time)/dv at the solution
  };

  auto corner_u = [&](cplx v) -> std::array<cplx, 2> {
    return {geo.g_c - (geo.g_max - v) / geo.c_e, (v - geo.g_min) / geo.c_x};
  };
  auto corner_d = [&](cplx v) -> std::array<cplx, 2> {
    return {geo.g_c + (geo.g_max - v) / geo.c_e, (v - geo.g_min) / geo.c_x};
  };

  // Touch point of the drifting ball from A on the sphere of radius w, used
  // for the feasibility check of a sphere-bound leg.
  auto sphere_touch = [&](Reduced A, double w, double t) -> Reduced {
    double z1 = A.x1 - geo.b * t;
    double n = std::sqrt(z1 * z1 + A.rho * A.rho);
    if (n <= 0.0) return {0.0, 0.0};
    return {w * z1 / n, w * A.rho / n};
  };
  auto leg_ok = [&](Reduced A, Reduced B, double lvl) {
    return segment_g_max(geo, A, B) <= lvl + 1e-9;
  };

  // Total time for one candidate path at level v, or +inf when the path is
  // not realizable there: a leg with no nonnegative reach time, or a leg that
  // leaves {g <= max(v, g(x))} (a path may move freely below the running max
  // it already pays at x). Candidates: the straight segment and the three
  // corner routes.
  auto path_time = [&](int cand, double v) -> double {
    double w = v - geo.alpha_min;
    if (w < 0.0) return kInf;
    double lvl = std::max(v, gx);
    Reduced cu{geo.g_c - (geo.g_max - v) / geo.c_e, (v - geo.g_min) / geo.c_x};
    Reduced cd{geo.g_c + (geo.g_max - v) / geo.c_e, (v - geo.g_min) / geo.c_x};
    if (cand == 0) {
      auto t = reach_time_real(P.x1, P.rho, w, geo.b, geo.c);
      if (!t || !leg_ok(P, sphere_touch(P, w, *t), lvl)) return kInf;
      return *t;
    }
    if (cand == 1 || cand == 2) {
      Reduced C = cand == 1 ? cu : cd;
      auto t_in =
          reach_time_real(P.x1 - C.x1, P.rho - C.rho, 0.0, geo.b, geo.c);
      auto t_out = reach_time_real(C.x1, C.rho, w, geo.b, geo.c);
      if (!t_in || !t_out) return kInf;
      if (!leg_ok(P, C, lvl) || !leg_ok(C, sphere_touch(C, w, *t_out), lvl))
        return kInf;
      return *t_in + *t_out;
    }
    auto t_in =
        reach_time_real(P.x1 - cd.x1, P.rho - cd.rho, 0.0, geo.b, geo.c);
    auto t_out = reach_time_real(cu.x1, cu.rho, w, geo.b, geo.c);
    if (!t_in || !t_out) return kInf;
    if (!leg_ok(P, cd, lvl) || !leg_ok(cd, cu, lvl) ||
        !leg_ok(cu, sphere_touch(cu, w, *t_out), lvl))
      return kInf;
    return *t_in + (cd.x1 - cu.x1) / (geo.b + geo.c) + *t_out;
  };
  auto feasible = [&](double v) {
    for (int cand = 0; cand < 4; ++cand)
      if (path_time(cand, v) <= tau + 1e-9) return true;
    return false;
  };

  // Smallest level at which some candidate path is both allowed and fast
  // enough. Newton below only sees roots of the total-time equations, but a
  // level can also become reachable without one: the sphere can swallow the
  // drifted point early (arrival plus stalling), or a path can simply stop
  // being blocked, as the straight segment does once the level meets its
  // blocking maximum. A coarse sweep with bisection at the first onset
  // catches those. The straight segment is always realizable and fast at
  // v = g_max, so the sweep has a feasible right end whenever the wall
  // matters at all.
  double sweep_v = kInf;
  if (feasible(sc.v_free)) {
    sweep_v = sc.v_free;
  } else {
    const int K = 128;
    double prev = sc.v_free;
    for (int k = 1; k <= K; ++k) {
      double vk = sc.v_free + (geo.g_max - sc.v_free) * k / K;
      if (feasible(vk)) {
        double a = prev, b = vk;
        for (int it = 0; it < 64; ++it) {
          double mid = 0.5 * (a + b);
          (feasible(mid) ? b : a) = mid;
        }
        sweep_v = b;
        break;
      }
      prev = vk;
    }
  }

  // Route residual R(v) = total reach time - tau and its dv-derivative.
  // route 0: x -> cu -> sphere; 1: x -> cd -> sphere; 2: x -> cd -> cu -> sphere
  auto route_residual = [&](int route, cplx v, cplx* dR, cplx legs[3],
                            int* nlegs) -> cplx {
    auto cu = corner_u(v);
    auto cd = corner_d(v);
    cplx w = v - geo.alpha_min;
    cplx d0, d1, d2;
    *nlegs = 0;
    if (route == 0) {
      legs[(*nlegs)++] = reach_time_cplx(P.x1 - cu[0], P.rho - cu[1], 0.0,
                                         geo.b, geo.c, -dy1, -dyr, 0.0, &d0);
      legs[(*nlegs)++] = reach_time_cplx(cu[0], cu[1], w, geo.b, geo.c, dy1,
                                         dyr, 1.0, &d1);
      *dR = d0 + d1;
    } else if (route == 1) {
      legs[(*nlegs)++] = reach_time_cplx(P.x1 - cd[0], P.rho - cd[1], 0.0,
                                         geo.b, geo.c, dy1, -dyr, 0.0, &d0);
      legs[(*nlegs)++] = reach_time_cplx(cd[0], cd[1], w, geo.b, geo.c, -dy1,
                                         dyr, 1.0, &d1);
      *dR = d0 + d1;
    } else {
      legs[(*nlegs)++] = reach_time_cplx(P.x1 - cd[0], P.rho - cd[1], 0.0,
                                         geo.b, geo.c, dy1, -dyr, 0.0, &d0);
      // corner-to-corner run along the lid, helped by the drift
      legs[(*nlegs)++] = (cd[0] - cu[0]) / (geo.b + geo.c);
      d1 = -2.0 / (geo.c_e * (geo.b + geo.c));
      legs[(*nlegs)++] = reach_time_cplx(cu[0], cu[1], w, geo.b, geo.c, dy1,
                                         dyr, 1.0, &d2);
      *dR = d0 + d1 + d2;
    }
    cplx R = -tau;
    for (int k = 0; k < *nlegs; ++k) R += legs[k];
    return R;
  };

  auto solve_route = [&](int route, double v0) -> RouteFit {
    RouteFit fit;
    cplx v = v0;
    cplx legs[3];
    int nlegs = 0;
    for (fit.iters = 0; fit.iters < 100; ++fit.iters) {
      cplx dR;
      cplx R = route_residual(route, v, &dR, legs, &nlegs);
      fit.resid = std::abs(R);
      fit.slope = dR.real();
      if (fit.resid <= 1e-10) {
        fit.converged = true;
        break;
      }
      if (std::abs(dR) < 1e-14) break;  // flat residual, give up
      cplx step = R / dR;
      double sn = std::abs(step);
      if (sn > 1.0) step *= 1.0 / sn;  // damp long jumps
      v -= step;
    }
    fit.v = v.real();
    if (!fit.converged || std::fabs(v.imag()) > 1e-8) return fit;
    // Only a crossing where the route time falls through tau marks the
    // smallest reachable level; a rising crossing is where the detour grows
    // past tau again and carries no meaning.
    if (fit.slope > 0.0) return fit;
    for (int k = 0; k < nlegs; ++k)
      if (legs[k].real() < -1e-9 || std::fabs(legs[k].imag()) > 1e-8)
        return fit;

    // The bent construction only makes sense while the wall exists and the
    // door is open; roots outside that window are artifacts of the
    // continuation.
    double vw = fit.v;
    if (vw < geo.g_min - 1e-9 || vw > geo.g_max + 1e-9) return fit;

    // geometric validation at the real solution
    double lvl = std::max(vw, gx);
    Reduced cu{geo.g_c - (geo.g_max - vw) / geo.c_e,
               (vw - geo.g_min) / geo.c_x};
    Reduced cd{geo.g_c + (geo.g_max - vw) / geo.c_e,
               (vw - geo.g_min) / geo.c_x};
    double w = vw - geo.alpha_min;
    if (w < 0.0) return fit;
    if (route == 0) {
      Reduced touch = sphere_touch(cu, w, legs[1].real());
      fit.valid = leg_ok(P, cu, lvl) && leg_ok(cu, touch, lvl);
    } else if (route == 1) {
      Reduced touch = sphere_touch(cd, w, legs[1].real());
      fit.valid = leg_ok(P, cd, lvl) && leg_ok(cd, touch, lvl);
    } else {
      Reduced touch = sphere_touch(cu, w, legs[2].real());
      fit.valid = leg_ok(P, cd, lvl) && leg_ok(cd, cu, lvl) &&
                  leg_ok(cu, touch, lvl);
    }
    return fit;
  };

  // The first start is always the unobstructed value. A coarse scan of the
  // residual over the admissible window [v_free, g_max] supplies fallback
  // starts near real sign changes, so a route whose basin from v_free leads
  // to an artifact root still gets solved.
  RouteFit best;
  int converged = 0;
  double worst_resid = 0.0;
  for (int route = 0; route < 3; ++route) {
    std::vector<double> starts = {sc.v_free};
    const int K = 64;
    if (geo.g_max > sc.v_free + 1e-12) {
      cplx legs[3];
      int nlegs;
      double prev_re = 0.0;
      bool prev_ok = false;
      for (int k = 0; k <= K; ++k) {
        double vk = sc.v_free + (geo.g_max - sc.v_free) * k / K;
        cplx dR;
        cplx R = route_residual(route, vk, &dR, legs, &nlegs);
        bool ok = std::fabs(R.imag()) <= 1e-7;
        if (ok && prev_ok && prev_re * R.real() <= 0.0)
          starts.push_back(vk - 0.5 * (geo.g_max - sc.v_free) / K);
        prev_ok = ok;
        prev_re = R.real();
      }
    }
    RouteFit route_best;
    for (double v0 : starts) {
      RouteFit fit = solve_route(route, v0);
      if (fit.converged) ++converged;
      worst_resid = std::max(worst_resid, fit.resid);
      if (fit.valid && fit.v < route_best.v) route_best = fit;
    }
    if (route_best.valid && route_best.v < best.v) best = route_best;
  }

  double best_v = best.valid ? std::min(best.v, sweep_v) : sweep_v;
  if (!(best_v < kInf)) {
    if (converged == 0) {
      char buf[128];
      std::snprintf(buf, sizeof buf,
                    "door-corner Newton did not converge (residual %.3e)",
                    worst_resid);
      throw numeric_error(buf);
    }
    res.branch = OracleBranch::Unreached;
    res.v = std::numeric_limits<double>::quiet_NaN();
    return res;
  }
  if (best.valid && best.v <= sweep_v + 1e-9) {
    res.newton_iters = best.iters;
    res.residual = best.resid;
  } else {
    res.newton_iters = 0;
    res.residual = 0.0;
  }
  res.branch = OracleBranch::TwoSegment;
  res.v = std::max(best_v, gx);
  return res;
}

TwoSegmentBruteForce eikadv_two_segment_bruteforce(const WallGeometry& geo,
                                                   double tau, const double* x,
                                                   int d, int door_points) {
  Reduced P = reduce(x, d);
  TwoSegmentBruteForce out;
  if (tau <= 1e-14) {
    out.v = std::max(g_reduced(geo, P.x1, P.rho), geo.phi(x, d));
    return out;
  }
  StraightCandidate sc = straight_candidate(geo, tau, P);
  if (!sc.blocked) {
    out.v = sc.v_free;
    return out;
  }
  out.two_segment = true;
  const double gx = g_reduced(geo, P.x1, P.rho);

  // Fastest path to the sphere that stays inside {g <= max(v, g(x))}, found
  // by minimizing over a discretized family of bend points on the level edge
  // {g = v}. Candidates: no bend, one bend on the lid or on either vertical
  // face (both corners land exactly on the grid), and the two-bend run
  // around both corners. Each leg is checked against the level before its
  // time counts, so paths cutting through the high-g region never win.
  int nh = door_points / 2, nv = door_points - nh;
  auto t_min = [&](double v) -> double {
    double width = std::max((geo.g_max - v) / geo.c_e, 0.0);
    double rho_c = std::max((v - geo.g_min) / geo.c_x, 0.0);
    double w = std::max(v - geo.alpha_min, 0.0);
    double lvl = std::max(v, gx) + 1e-9;
    double best = kInf;
    auto touch_of = [&](Reduced A, double t) -> Reduced {
      double z1 = A.x1 - geo.b * t;
      double n2 = std::sqrt(z1 * z1 + A.rho * A.rho);
      if (n2 <= 0.0) return {0.0, 0.0};
      return {w * z1 / n2, w * A.rho / n2};
    };
    auto leg_ok = [&](Reduced A, Reduced B) {
      return segment_g_max(geo, A, B) <= lvl;
    };
    auto consider = [&](double y1, double yr) {
      Reduced bend{y1, yr};
      auto t2 = reach_time_real(P.x1 - y1, P.rho - yr, 0.0, geo.b, geo.c);
      if (!t2 || !leg_ok(P, bend)) return;
      auto t1 = reach_time_real(y1, yr, w, geo.b, geo.c);
      if (!t1 || !leg_ok(bend, touch_of(bend, *t1))) return;
      double tt = *t1 + *t2;
      if (tt < best) best = tt;
    };

    // no bend (relevant once the level clears the wall entirely)
    if (auto ts = reach_time_real(P.x1, P.rho, w, geo.b, geo.c))
      if (leg_ok(P, touch_of(P, *ts)) && *ts < best) best = *ts;

    double x_lo = geo.g_c - width, x_hi = geo.g_c + width;
    for (int k = 0; k <= nh; ++k)
      consider(x_lo + 2.0 * width * k / nh, rho_c);
    double rho_cap = rho_c + (geo.b + geo.c) * tau + 2.0;
    for (int k = 0; k <= nv; ++k) {
      double yr = rho_c + (rho_cap - rho_c) * k / nv;
      consider(x_lo, yr);
      consider(x_hi, yr);
    }

    // around both corners: far corner first, then along the lid with the
    // drift, then from the near corner to the sphere
    Reduced cu{x_lo, rho_c}, cd{x_hi, rho_c};
    auto t_in = reach_time_real(P.x1 - cd.x1, P.rho - cd.rho, 0.0, geo.b,
                                geo.c);
    auto t_out = reach_time_real(cu.x1, cu.rho, w, geo.b, geo.c);
    if (t_in && t_out && leg_ok(P, cd) && leg_ok(cd, cu) &&
        leg_ok(cu, touch_of(cu, *t_out))) {
      double tt = *t_in + 2.0 * width / (geo.b + geo.c) + *t_out;
      if (tt < best) best = tt;
    }
    return best;
  };

  // Reachability can switch on either because a detour finally fits in tau or
  // because a path stops being blocked as the level rises, so scan the window
  // up to the top of the wall for the first feasible level, then bisect onto
  // the onset. The straight segment is always allowed and fast once v clears
  // every g value along it, which happens at or below g_max.
  double lo = sc.v_free;
  if (t_min(lo) <= tau) {
    out.v = std::max(sc.v_free, gx);
    return out;
  }
  const int K = 128;
  double hi = kInf;
  for (int k = 1; k <= K; ++k) {
    double vk = sc.v_free + (geo.g_max - sc.v_free) * k / K;
    if (t_min(vk) <= tau) {
      hi = vk;
      break;
    }
    lo = vk;
  }
  if (!(hi < kInf)) {
    out.reached = false;
    out.v = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  for (int k = 0; k < 64; ++k) {
    double mid = 0.5 * (lo + hi);
    if (t_min(mid) > tau)
      lo = mid;
    else
      hi = mid;
  }
  out.v = std::max(hi, gx);
  return out;
}

}  // namespace frontnet::problems
