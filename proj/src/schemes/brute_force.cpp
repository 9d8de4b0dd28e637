#include "frontnet/schemes/brute_force.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace frontnet::schemes {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

struct Dfs {
  const dynamics::ButcherTableau& tab;
  const problems::Problem& prob;
  const double* grid;
  int K, cd, N;
  double dt;
  int p;

  double run(int k, const double* x, double runmax) const {
    if (k == N) return std::max(runmax, prob.gphi(x));
    double best = kInf;
    double xn[dynamics::kMaxStateDim];
    for (int u = 0; u < K; ++u) {
      dynamics::StepResult sr = dynamics::coarse_step(
          tab, prob, x, grid + static_cast<size_t>(u) * cd, dt, p, xn);
      double rm = sr.has_G ? std::max(runmax, sr.G) : runmax;
      if (rm >= best) continue;  // any completion only raises the max
      double v = run(k + 1, xn, rm);
      if (v < best) best = v;
    }
    return best;
  }
};
}  // namespace

double brute_force_value(const dynamics::ButcherTableau& tab,
                         const problems::Problem& prob,
                         std::span<const double> control_grid, int n, int N,
                         double dt, int p, const double* x) {
  const int cd = prob.control_dim();
  if (control_grid.empty() || control_grid.size() % cd != 0)
    throw config_error("control grid size is not a multiple of the control dimension");
  const int K = static_cast<int>(control_grid.size()) / cd;
  if (n < 0 || n > N) throw config_error("time step out of range");
  if (std::pow(static_cast<double>(K), N - n) > 2e8)
    throw config_error("control grid too fine for exhaustive search");
  Dfs dfs{tab, prob, control_grid.data(), K, cd, N, dt, p};
  return dfs.run(n, x, -kInf);
}

std::vector<double> uniform_scalar_grid(double lo, double hi, int count) {
  if (count < 2) throw config_error("scalar grid needs at least 2 points");
  std::vector<double> g(count);
  for (int i = 0; i < count; ++i)
    g[i] = lo + (hi - lo) * i / (count - 1);
  return g;
}

std::vector<double> unit_direction_grid(int d, int count) {
  if (d < 2) throw config_error("direction grid needs dimension >= 2");
  if (count < 1) throw config_error("direction grid needs at least 1 entry");
  std::vector<double> g(static_cast<size_t>(count) * d, 0.0);
  if (d == 2) {
    for (int i = 0; i < count; ++i) {
      double th = 2.0 * kPi * i / count;
      g[2 * i] = std::cos(th);
      g[2 * i + 1] = std::sin(th);
    }
    return g;
  }
  // fixed-seed Gaussian spread, adequate for smoke checks in d > 2
  Rng rng(0x5eed0d1aULL);
  for (int i = 0; i < count; ++i) {
    double* v = g.data() + static_cast<size_t>(i) * d;
    double r2 = 0.0;
    while (r2 < 1e-12) {
      r2 = 0.0;
      for (int m = 0; m < d; ++m) {
        double u1 = rng.uniform(1e-12, 1.0), u2 = rng.uniform(0.0, 1.0);
        v[m] = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
        r2 += v[m] * v[m];
      }
    }
    double inv = 1.0 / std::sqrt(r2);
    for (int m = 0; m < d; ++m) v[m] *= inv;
  }
  return g;
}

}  // namespace frontnet::schemes
