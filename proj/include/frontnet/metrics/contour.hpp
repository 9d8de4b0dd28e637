#pragma once

#include <array>
#include <span>
#include <vector>

#include "frontnet/metrics/grid.hpp"

namespace frontnet::metrics {

using Polyline = std::vector<std::array<double, 2>>;

// Zero level set of a scalar field sampled on the grid, as chained polylines
// in plane coordinates (a, b). Cells are marched independently; crossings on
// shared cell edges are keyed by the edge itself, so chaining needs no
// floating-point tolerance. Ambiguous cells split by the sign of the cell
// center average. Closed loops repeat their first vertex at the end.
std::vector<Polyline> zero_contours(const ReferenceGrid& grid,
                                    std::span<const double> values);

}  // namespace frontnet::metrics
