#pragma once

#include <algorithm>
#include <vector>

#include "mwm/core.hpp"
#include "mwm/oracle.hpp"

namespace mwm::testing {

// Independent brute-force oracle: enumerates every matching recursively.
// Only for tiny instances; used to cross-check the bitmask DP.
inline double brute_force_best(const std::vector<EdgeRecord>& edges,
                               std::size_t i, std::uint64_t used) {
  if (i == edges.size()) return 0.0;
  double best = brute_force_best(edges, i + 1, used);
  const auto& e = edges[i];
  std::uint64_t mask =
      (std::uint64_t{1} << e.u) | (std::uint64_t{1} << e.v);
  if (e.u != e.v && !(used & mask))
    best = std::max(best,
                    e.w + brute_force_best(edges, i + 1, used | mask));
  return best;
}

inline double brute_force_mwm(const SmallGraph& g) {
  return brute_force_best(g.edges, 0, 0);
}

inline SmallGraph to_graph(const std::vector<EdgeRecord>& edges) {
  SmallGraph g;
  for (const auto& e : edges) g.n = std::max({g.n, e.u + 1, e.v + 1});
  g.edges = edges;
  return g;
}

}  // namespace mwm::testing
