#pragma once

#include <string>
#include <vector>

#include "frontnet/common.hpp"

namespace frontnet::dynamics {

// Coefficients of an explicit Runge-Kutta one-step map
//   y_i = x + h * sum_{j<i} b_ij f(y_j, a),   F_h(x,a) = x + h * sum_i c_i f(y_i, a).
struct ButcherTableau {
  std::string name;
  int q = 0;
  std::vector<double> B;  // q x q row-major, strictly lower triangular
  std::vector<double> c;  // q entries

  ButcherTableau() = default;
  ButcherTableau(std::string name, int q, std::vector<double> B, std::vector<double> c);

  double b(int i, int j) const { return B[static_cast<size_t>(i) * q + j]; }
  bool consistent() const;  // sum_i c_i == 1

  static ButcherTableau euler();
  static ButcherTableau heun();
  static ButcherTableau rk4();
  static ButcherTableau by_name(const std::string& name);
};

}  // namespace frontnet::dynamics
