#pragma once

#include <memory>
#include <optional>
#include <string>

#include "frontnet/autodiff/tape.hpp"
#include "frontnet/common.hpp"
#include "frontnet/nn/net.hpp"

namespace frontnet::problems {

struct Box {
  Vec lo, hi;
  int dim() const { return static_cast<int>(lo.size()); }
};

// Defaults for the 2-d reference plane on which errors and contours live.
struct PlaneDefaults {
  Vec w1, w2;      // basis vectors in R^d
  Vec center;      // plane origin in R^d
  double rmax = 2.0;
};

// A control problem instance: dynamics f(x,a), obstacle g (optional),
// terminal cost phi, horizon T, control encoding and sampling domain.
// Trajectories maximize nothing themselves; the running cost is
// max_k g(X_k) v phi(X_N), minimized over controls a in A.
class Problem {
 public:
  virtual ~Problem() = default;

  const std::string& name() const { return name_; }
  int dim() const { return d_; }
  int control_dim() const { return control_dim_; }
  double horizon() const { return T_; }
  bool has_obstacle() const { return has_obstacle_; }
  const nn::OutputMap& control_map() const { return control_map_; }
  const Box& sampling_box() const { return box_; }
  const PlaneDefaults& plane() const { return plane_; }

  virtual void f(const double* x, const double* a, double* out) const = 0;
  virtual double g(const double* x) const;
  virtual double phi(const double* x) const = 0;

  virtual ad::Var f(ad::Tape& t, ad::Var x, ad::Var a) const = 0;
  virtual ad::Var g(ad::Tape& t, ad::Var x) const;
  virtual ad::Var phi(ad::Tape& t, ad::Var x) const = 0;

  // Terminal value g v phi (just phi when there is no obstacle).
  double gphi(const double* x) const {
    return has_obstacle_ ? std::max(g(x), phi(x)) : phi(x);
  }
  ad::Var gphi(ad::Tape& t, ad::Var x) const {
    return has_obstacle_ ? t.max(g(t, x), phi(t, x)) : phi(t, x);
  }

  virtual bool has_oracle() const { return false; }
  // Exact (or semi-analytical) value v(t,x); throws when has_oracle() is false.
  virtual double oracle(double t, const double* x) const;

  // rotation | eikonal | eikadv-large | eikadv-small
  static std::unique_ptr<Problem> make(const std::string& name, int d);
  static std::vector<std::string> known_names();

 protected:
  Problem(std::string name, int d, int control_dim, double T, bool has_obstacle,
          nn::OutputMap control_map, Box box, PlaneDefaults plane);

  std::string name_;
  int d_;
  int control_dim_;
  double T_;
  bool has_obstacle_;
  nn::OutputMap control_map_;
  Box box_;
  PlaneDefaults plane_;
};

}  // namespace frontnet::problems
