#pragma once

#include "frontnet/problems/eikadv_oracle.hpp"
#include "frontnet/problems/problem.hpp"

namespace frontnet::problems {

enum class DriftRegime { Large, Small };  // b=1,c=0.5 vs b=0.5,c=1

// Front propagation with constant drift through a wall obstacle with a door
// opening (see WallGeometry). Control acts isotropically at speed c while the
// drift of magnitude b is fixed, so the front advances downstream and has to
// squeeze through the door.
class EikonalAdvection : public Problem {
 public:
  EikonalAdvection(int d, DriftRegime regime, double T = 4.0);

  const WallGeometry& geometry() const { return geo_; }
  DriftRegime regime() const { return regime_; }

  void f(const double* x, const double* a, double* out) const override;
  double g(const double* x) const override;
  double phi(const double* x) const override;

  ad::Var f(ad::Tape& t, ad::Var x, ad::Var a) const override;
  ad::Var g(ad::Tape& t, ad::Var x) const override;
  ad::Var phi(ad::Tape& t, ad::Var x) const override;

  bool has_oracle() const override { return true; }
  double oracle(double t, const double* x) const override;
  EikadvOracleResult oracle_detail(double t, const double* x) const;

 private:
  WallGeometry geo_;
  DriftRegime regime_;
};

}  // namespace frontnet::problems
