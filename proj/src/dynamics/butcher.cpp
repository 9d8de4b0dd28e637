#include "frontnet/dynamics/butcher.hpp"

#include <cmath>

namespace frontnet::dynamics {

ButcherTableau::ButcherTableau(std::string name_, int q_, std::vector<double> B_,
                               std::vector<double> c_)
    : name(std::move(name_)), q(q_), B(std::move(B_)), c(std::move(c_)) {
  if (q < 1) throw config_error("tableau: q must be >= 1");
  if (B.size() != static_cast<size_t>(q) * q || c.size() != static_cast<size_t>(q))
    throw config_error("tableau: coefficient shapes do not match q");
  for (int i = 0; i < q; ++i)
    for (int j = i; j < q; ++j)
      if (b(i, j) != 0.0)
        throw config_error("tableau '" + name + "' is not explicit (b_ij != 0 for j >= i)");
}

bool ButcherTableau::consistent() const {
  double s = 0.0;
  for (double ci : c) s += ci;
  return std::fabs(s - 1.0) <= 1e-14;
}

ButcherTableau ButcherTableau::euler() {
  return ButcherTableau("euler", 1, {0.0}, {1.0});
}

ButcherTableau ButcherTableau::heun() {
  return ButcherTableau("heun", 2, {0.0, 0.0, 1.0, 0.0}, {0.5, 0.5});
}

ButcherTableau ButcherTableau::rk4() {
  // clang-format off
  std::vector<double> B = {
      0.0, 0.0, 0.0, 0.0,
      0.5, 0.0, 0.0, 0.0,
      0.0, 0.5, 0.0, 0.0,
      0.0, 0.0, 1.0, 0.0};
  // clang-format on
  return ButcherTableau("rk4", 4, std::move(B),
                        {1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0});
}

ButcherTableau ButcherTableau::by_name(const std::string& name) {
  if (name == "euler") return euler();
  if (name == "heun") return heun();
  if (name == "rk4") return rk4();
  throw config_error("unknown tableau: " + name + " (expected euler|heun|rk4)");
}

}  // namespace frontnet::dynamics
