#pragma once

#include <span>

#include "frontnet/autodiff/tape.hpp"
#include "frontnet/dynamics/butcher.hpp"
#include "frontnet/nn/net.hpp"
#include "frontnet/problems/problem.hpp"

namespace frontnet::dynamics {

inline constexpr int kMaxStateDim = 32;

// One explicit Runge-Kutta step of x' = f(x, a) with the control held fixed
// over the whole step.
void rk_step(const ButcherTableau& tab, const problems::Problem& prob,
             const double* x, const double* a, double h, double* out);

struct StepResult {
  double G = 0.0;
  bool has_G = false;
};

// Coarse step F(x, a): p fine substeps of size dt/p with one frozen control.
// For obstacle problems, G is max g over the substep feet Y_0 .. Y_{p-1};
// the landing point is charged to the next coarse step.
StepResult coarse_step(const ButcherTableau& tab, const problems::Problem& prob,
                       const double* x, const double* a, double dt, int p,
                       double* out);

struct TapedStep {
  ad::Var xnext;
  ad::Var G;  // invalid when the problem has no obstacle
  bool has_G = false;
};

ad::Var rk_step(ad::Tape& tape, const ButcherTableau& tab,
                const problems::Problem& prob, ad::Var x, ad::Var a, double h);

TapedStep coarse_step(ad::Tape& tape, const ButcherTableau& tab,
                      const problems::Problem& prob, ad::Var x, ad::Var a,
                      double dt, int p);

// Cost-to-go of the feedback chain nets[n..N-1] from state x at step n:
// running max of the per-step G values, capped with max(g, phi) at the end.
// nets is indexed by absolute step, so it must have at least N entries.
double trajectory_cost(const ButcherTableau& tab, const problems::Problem& prob,
                       std::span<const nn::FeedforwardNet* const> nets, int n,
                       int N, double dt, int p, const double* x,
                       nn::FeedforwardNet::Workspace& ws);

// Taped variant. The nets act as frozen coefficients: the result is
// differentiable in x but no weight gradients are accumulated.
ad::Var trajectory_cost(ad::Tape& tape, const ButcherTableau& tab,
                        const problems::Problem& prob,
                        std::span<const nn::FeedforwardNet* const> nets, int n,
                        int N, double dt, int p, ad::Var x);

// Open-loop variant: constant controls a_n .. a_{N-1} stored contiguously
// starting at controls (control_dim doubles each).
double trajectory_cost_openloop(const ButcherTableau& tab,
                                const problems::Problem& prob,
                                const double* controls, int n, int N, double dt,
                                int p, const double* x);

}  // namespace frontnet::dynamics
