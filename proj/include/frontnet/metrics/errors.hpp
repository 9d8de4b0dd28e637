#pragma once

#include <span>

#include "frontnet/metrics/grid.hpp"

namespace frontnet::metrics {

// Max and mean absolute deviation between a computed value field and a
// reference, once over the whole grid and once restricted to the band
// {|reference| <= eta} around the zero level set. eta = infinity collapses
// the band onto the whole grid.
struct ErrorStats {
  double global_linf = 0.0;
  double global_l1 = 0.0;  // mean absolute error
  double local_linf = 0.0;
  double local_l1 = 0.0;
  size_t local_count = 0;
};

ErrorStats compute_errors(std::span<const double> computed,
                          std::span<const double> reference, double eta);

}  // namespace frontnet::metrics
