#pragma once

#include "frontnet/problems/problem.hpp"

namespace frontnet::problems {

// Planar rotation steered between clockwise and counter-clockwise.
//   f(x,a) = 2*pi*a*(-x2, x1), a in [-1,1]
//   target: disk of radius 0.5 at x_A = (1,0)   (phi = |x - x_A| - 0.5)
//   obstacle: disk of radius 0.25 at x_B = (0,1) (g = 0.25 - |x - x_B|)
// Trajectories preserve |x|, so the exact value reduces to a 1-d search over
// the final angle; see oracle().
class Rotation : public Problem {
 public:
  Rotation();

  void f(const double* x, const double* a, double* out) const override;
  double g(const double* x) const override;
  double phi(const double* x) const override;

  ad::Var f(ad::Tape& t, ad::Var x, ad::Var a) const override;
  ad::Var g(ad::Tape& t, ad::Var x) const override;
  ad::Var phi(ad::Tape& t, ad::Var x) const override;

  bool has_oracle() const override { return true; }
  double oracle(double t, const double* x) const override;

  // Angle samples per sweep direction for the oracle search.
  void set_oracle_samples(int n);
  int oracle_samples() const { return samples_; }

 private:
  int samples_ = 4096;
};

}  // namespace frontnet::problems
