#include "frontnet/problems/problem.hpp"

#include "frontnet/problems/eikadv.hpp"
#include "frontnet/problems/eikonal.hpp"
#include "frontnet/problems/rotation.hpp"

namespace frontnet::problems {

Problem::Problem(std::string name, int d, int control_dim, double T,
                 bool has_obstacle, nn::OutputMap control_map, Box box,
                 PlaneDefaults plane)
    : name_(std::move(name)),
      d_(d),
      control_dim_(control_dim),
      T_(T),
      has_obstacle_(has_obstacle),
      control_map_(control_map),
      box_(std::move(box)),
      plane_(std::move(plane)) {
  if (d_ < 1 || d_ > 32) throw config_error("problem dimension out of range [1,32]");
  if (box_.dim() != d_) throw config_error("sampling box dimension mismatch");
}

double Problem::g(const double*) const {
  throw numeric_error("problem '" + name_ + "' has no obstacle");
}

ad::Var Problem::g(ad::Tape&, ad::Var) const {
  throw numeric_error("problem '" + name_ + "' has no obstacle");
}

double Problem::oracle(double, const double*) const {
  throw numeric_error("problem '" + name_ + "' has no exact-value oracle");
}

std::unique_ptr<Problem> Problem::make(const std::string& name, int d) {
  if (name == "rotation") {
    if (d != 0 && d != 2) throw config_error("rotation is 2-dimensional");
    return std::make_unique<Rotation>();
  }
  if (name == "eikonal") return std::make_unique<Eikonal>(d == 0 ? 2 : d);
  if (name == "eikadv-large")
    return std::make_unique<EikonalAdvection>(d == 0 ? 2 : d, DriftRegime::Large);
  if (name == "eikadv-small")
    return std::make_unique<EikonalAdvection>(d == 0 ? 2 : d, DriftRegime::Small);
  throw config_error("unknown problem: " + name +
                     " (expected rotation|eikonal|eikadv-large|eikadv-small)");
}

std::vector<std::string> Problem::known_names() {
  return {"rotation", "eikonal", "eikadv-large", "eikadv-small"};
}

}  // namespace frontnet::problems
