#include "frontnet/metrics/errors.hpp"

#include <cmath>

namespace frontnet::metrics {

ErrorStats compute_errors(std::span<const double> computed,
                          std::span<const double> reference, double eta) {
  if (computed.size() != reference.size() || computed.empty())
    throw config_error("value fields must be non-empty and equally sized");
  if (!(eta > 0.0)) throw config_error("eta must be positive");
  ErrorStats s;
  double sum = 0.0, lsum = 0.0;
  for (size_t i = 0; i < computed.size(); ++i) {
    const double err = std::fabs(computed[i] - reference[i]);
    if (err > s.global_linf) s.global_linf = err;
    sum += err;
    if (std::fabs(reference[i]) <= eta) {
      if (err > s.local_linf) s.local_linf = err;
      lsum += err;
      ++s.local_count;
    }
  }
  s.global_l1 = sum / computed.size();
  if (s.local_count == 0)
    throw numeric_error("no grid point lies inside the local error band");
  s.local_l1 = lsum / s.local_count;
  return s;
}

}  // namespace frontnet::metrics
