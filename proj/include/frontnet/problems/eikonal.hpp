#pragma once

#include "frontnet/problems/problem.hpp"

namespace frontnet::problems {

// Front propagation at unit speed in R^d: f(x,a) = a with |a| <= 1, no
// obstacle. Terminal cost is the smaller of two sphere distances,
//   phi(x) = min(|x - x_A|, |x - x_B|) - 0.5,  x_A = (1,0,...), x_B = (-1,0,...),
// and the exact value has the closed form
//   v(t,x) = min_c (|x - x_c| - (T-t))_+ - 0.5.
class Eikonal : public Problem {
 public:
  explicit Eikonal(int d);

  void f(const double* x, const double* a, double* out) const override;
  double phi(const double* x) const override;

  ad::Var f(ad::Tape& t, ad::Var x, ad::Var a) const override;
  ad::Var phi(ad::Tape& t, ad::Var x) const override;

  bool has_oracle() const override { return true; }
  double oracle(double t, const double* x) const override;
};

}  // namespace frontnet::problems
