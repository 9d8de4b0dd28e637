#include "frontnet/dynamics/rollout.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace frontnet::dynamics {

namespace {
constexpr int kMaxStages = 8;
}

void rk_step(const ButcherTableau& tab, const problems::Problem& prob,
             const double* x, const double* a, double h, double* out) {
  const int d = prob.dim();
  if (d > kMaxStateDim) throw numeric_error("state dimension exceeds rk_step buffer");
  if (tab.q > kMaxStages) throw numeric_error("tableau has too many stages");
  double k[kMaxStages][kMaxStateDim];
  double xs[kMaxStateDim];
  for (int i = 0; i < tab.q; ++i) {
    for (int m = 0; m < d; ++m) {
      double acc = x[m];
      for (int j = 0; j < i; ++j) {
        double bij = tab.b(i, j);
        if (bij != 0.0) acc += h * bij * k[j][m];
      }
      xs[m] = acc;
    }
    prob.f(xs, a, k[i]);
  }
  for (int m = 0; m < d; ++m) {
    double acc = x[m];
    for (int i = 0; i < tab.q; ++i) {
      double ci = tab.c[i];
      if (ci != 0.0) acc += h * ci * k[i][m];
    }
    out[m] = acc;
  }
}

StepResult coarse_step(const ButcherTableau& tab, const problems::Problem& prob,
                       const double* x, const double* a, double dt, int p,
                       double* out) {
  if (p < 1) throw config_error("substep count must be at least 1");
  const int d = prob.dim();
  const double h = dt / p;
  double cur[kMaxStateDim], nxt[kMaxStateDim];
  std::copy(x, x + d, cur);
  StepResult res;
  const bool obst = prob.has_obstacle();
  for (int j = 0; j < p; ++j) {
    if (obst) {
      double gj = prob.g(cur);
      if (!res.has_G || gj > res.G) {
        res.G = gj;
        res.has_G = true;
      }
    }
    rk_step(tab, prob, cur, a, h, nxt);
    std::copy(nxt, nxt + d, cur);
  }
  std::copy(cur, cur + d, out);
  return res;
}

ad::Var rk_step(ad::Tape& tape, const ButcherTableau& tab,
                const problems::Problem& prob, ad::Var x, ad::Var a, double h) {
  ad::Var k[kMaxStages];
  if (tab.q > kMaxStages) throw numeric_error("tableau has too many stages");
  std::vector<ad::Var> terms;
  std::vector<double> coeffs;
  for (int i = 0; i < tab.q; ++i) {
    terms.clear();
    coeffs.clear();
    terms.push_back(x);
    coeffs.push_back(1.0);
    for (int j = 0; j < i; ++j) {
      double bij = tab.b(i, j);
      if (bij != 0.0) {
        terms.push_back(k[j]);
        coeffs.push_back(h * bij);
      }
    }
    ad::Var xs = terms.size() == 1 ? x : tape.lincomb(terms, coeffs);
    k[i] = prob.f(tape, xs, a);
  }
  terms.clear();
  coeffs.clear();
  terms.push_back(x);
  coeffs.push_back(1.0);
  for (int i = 0; i < tab.q; ++i) {
    if (tab.c[i] != 0.0) {
      terms.push_back(k[i]);
      coeffs.push_back(h * tab.c[i]);
    }
  }
  return tape.lincomb(terms, coeffs);
}

TapedStep coarse_step(ad::Tape& tape, const ButcherTableau& tab,
                      const problems::Problem& prob, ad::Var x, ad::Var a,
                      double dt, int p) {
  if (p < 1) throw config_error("substep count must be at least 1");
  const double h = dt / p;
  TapedStep out;
  ad::Var cur = x;
  const bool obst = prob.has_obstacle();
  for (int j = 0; j < p; ++j) {
    if (obst) {
      ad::Var gj = prob.g(tape, cur);
      out.G = out.has_G ? tape.max(out.G, gj) : gj;
      out.has_G = true;
    }
    cur = rk_step(tape, tab, prob, cur, a, h);
  }
  out.xnext = cur;
  return out;
}

double trajectory_cost(const ButcherTableau& tab, const problems::Problem& prob,
                       std::span<const nn::FeedforwardNet* const> nets, int n,
                       int N, double dt, int p, const double* x,
                       nn::FeedforwardNet::Workspace& ws) {
  const int d = prob.dim();
  const int cd = prob.control_dim();
  double cur[kMaxStateDim], nxt[kMaxStateDim];
  double a[kMaxStateDim];
  std::copy(x, x + d, cur);
  double run = -std::numeric_limits<double>::infinity();
  bool has_run = false;
  for (int k = n; k < N; ++k) {
    nets[k]->forward({cur, static_cast<size_t>(d)},
                     {a, static_cast<size_t>(cd)}, ws);
    StepResult sr = coarse_step(tab, prob, cur, a, dt, p, nxt);
    if (sr.has_G) {
      run = std::max(run, sr.G);
      has_run = true;
    }
    std::copy(nxt, nxt + d, cur);
  }
  double term = prob.gphi(cur);
  return has_run ? std::max(run, term) : term;
}

ad::Var trajectory_cost(ad::Tape& tape, const ButcherTableau& tab,
                        const problems::Problem& prob,
                        std::span<const nn::FeedforwardNet* const> nets, int n,
                        int N, double dt, int p, ad::Var x) {
  ad::Var cur = x;
  ad::Var run;
  for (int k = n; k < N; ++k) {
    ad::Var a = nets[k]->forward(tape, cur, nullptr);
    TapedStep st = coarse_step(tape, tab, prob, cur, a, dt, p);
    if (st.has_G) run = run.valid() ? tape.max(run, st.G) : st.G;
    cur = st.xnext;
  }
  ad::Var term = prob.gphi(tape, cur);
  return run.valid() ? tape.max(run, term) : term;
}

double trajectory_cost_openloop(const ButcherTableau& tab,
                                const problems::Problem& prob,
                                const double* controls, int n, int N, double dt,
                                int p, const double* x) {
  const int d = prob.dim();
  const int cd = prob.control_dim();
  double cur[kMaxStateDim], nxt[kMaxStateDim];
  std::copy(x, x + d, cur);
  double run = -std::numeric_limits<double>::infinity();
  bool has_run = false;
  for (int k = n; k < N; ++k) {
    const double* a = controls + static_cast<size_t>(k - n) * cd;
    StepResult sr = coarse_step(tab, prob, cur, a, dt, p, nxt);
    if (sr.has_G) {
      run = std::max(run, sr.G);
      has_run = true;
    }
    std::copy(nxt, nxt + d, cur);
  }
  double term = prob.gphi(cur);
  return has_run ? std::max(run, term) : term;
}

}  // namespace frontnet::dynamics
