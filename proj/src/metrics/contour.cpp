#include "frontnet/metrics/contour.hpp"

#include <cmath>
#include <unordered_map>

namespace frontnet::metrics {

namespace {

// Lattice edge between (i,j) and its neighbour in direction a (orient 0) or
// b (orient 1).
uint64_t edge_id(int orient, int i, int j, int n) {
  return (static_cast<uint64_t>(i) * n + j) << 1 | orient;
}

struct Segment {
  uint64_t e0, e1;
};

}  // namespace

std::vector<Polyline> zero_contours(const ReferenceGrid& grid,
                                    std::span<const double> values) {
  const int n = grid.n;
  if (values.size() != grid.size())
    throw config_error("value field does not match the grid");
  auto at = [&](int i, int j) { return values[static_cast<size_t>(i) * n + j]; };

  std::vector<Segment> segs;
  // crossing location on each cut edge, in plane coordinates
  std::unordered_map<uint64_t, std::array<double, 2>> cross;

  auto cut = [&](int orient, int i, int j) {
    uint64_t id = edge_id(orient, i, j, n);
    auto it = cross.find(id);
    if (it != cross.end()) return id;
    double va = at(i, j);
    double vb = orient == 0 ? at(i + 1, j) : at(i, j + 1);
    double t = va / (va - vb);
    std::array<double, 2> pt;
    if (orient == 0) {
      pt = {grid.coord(i) + t * (grid.coord(i + 1) - grid.coord(i)),
            grid.coord(j)};
    } else {
      pt = {grid.coord(i),
            grid.coord(j) + t * (grid.coord(j + 1) - grid.coord(j))};
    }
    cross.emplace(id, pt);
    return id;
  };

  for (int i = 0; i + 1 < n; ++i) {
    for (int j = 0; j + 1 < n; ++j) {
      if (!std::isfinite(at(i, j)) || !std::isfinite(at(i + 1, j)) ||
          !std::isfinite(at(i + 1, j + 1)) || !std::isfinite(at(i, j + 1)))
        continue;  // field undefined here (for example a masked oracle)
      const bool bl = at(i, j) >= 0.0, br = at(i + 1, j) >= 0.0;
      const bool tr = at(i + 1, j + 1) >= 0.0, tl = at(i, j + 1) >= 0.0;
      const int mask = bl | br << 1 | tr << 2 | tl << 3;
      if (mask == 0 || mask == 15) continue;
      auto bottom = [&] { return cut(0, i, j); };
      auto left = [&] { return cut(1, i, j); };
      auto top = [&] { return cut(0, i, j + 1); };
      auto right = [&] { return cut(1, i + 1, j); };
      switch (mask) {
        case 1: case 14: segs.push_back({left(), bottom()}); break;
        case 2: case 13: segs.push_back({bottom(), right()}); break;
        case 4: case 11: segs.push_back({right(), top()}); break;
        case 8: case 7: segs.push_back({top(), left()}); break;
        case 3: case 12: segs.push_back({left(), right()}); break;
        case 6: case 9: segs.push_back({bottom(), top()}); break;
        case 5: case 10: {
          double ctr = 0.25 * (at(i, j) + at(i + 1, j) + at(i + 1, j + 1) +
                               at(i, j + 1));
          // join the center to whichever diagonal matches its sign
          bool pos_diag = (mask == 5) == (ctr >= 0.0);
          if (pos_diag) {
            segs.push_back({bottom(), right()});
            segs.push_back({top(), left()});
          } else {
            segs.push_back({left(), bottom()});
            segs.push_back({right(), top()});
          }
          break;
        }
        default: break;
      }
    }
  }

  // chain segments that share lattice edges
  std::unordered_map<uint64_t, std::vector<size_t>> adj;
  for (size_t s = 0; s < segs.size(); ++s) {
    adj[segs[s].e0].push_back(s);
    adj[segs[s].e1].push_back(s);
  }
  std::vector<bool> used(segs.size(), false);
  std::vector<Polyline> out;

  auto walk = [&](size_t start, std::vector<uint64_t>& path) {
    // follow unique continuations from one end of the start segment
    path.clear();
    size_t s = start;
    uint64_t tail = segs[start].e1;
    path.push_back(segs[start].e0);
    path.push_back(tail);
    used[start] = true;
    for (;;) {
      const auto& cands = adj[tail];
      size_t next = SIZE_MAX;
      for (size_t c : cands)
        if (!used[c]) {
          next = c;
          break;
        }
      if (next == SIZE_MAX) break;
      used[next] = true;
      tail = segs[next].e0 == tail ? segs[next].e1 : segs[next].e0;
      path.push_back(tail);
      s = next;
    }
    (void)s;
  };

  std::vector<uint64_t> fwd, bwd;
  for (size_t s = 0; s < segs.size(); ++s) {
    if (used[s]) continue;
    walk(s, fwd);
    // extend from the other end unless the walk already closed the loop
    bwd.clear();
    if (fwd.front() != fwd.back()) {
      uint64_t head = fwd.front();
      for (;;) {
        const auto& cands = adj[head];
        size_t next = SIZE_MAX;
        for (size_t c : cands)
          if (!used[c]) {
            next = c;
            break;
          }
        if (next == SIZE_MAX) break;
        used[next] = true;
        head = segs[next].e0 == head ? segs[next].e1 : segs[next].e0;
        bwd.push_back(head);
      }
    }
    Polyline poly;
    poly.reserve(bwd.size() + fwd.size());
    for (auto it = bwd.rbegin(); it != bwd.rend(); ++it)
      poly.push_back(cross.at(*it));
    for (uint64_t e : fwd) poly.push_back(cross.at(e));
    out.push_back(std::move(poly));
  }
  return out;
}

}  // namespace frontnet::metrics
