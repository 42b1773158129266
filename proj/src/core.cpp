#include "mwm/core.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace mwm {

bool matching_valid(const Matching& m, double tol) {
  std::unordered_set<VertexId> seen;
  double sum = 0.0;
  for (const auto& e : m.edges) {
    if (e.u == e.v) return false;
    if (!seen.insert(e.u).second) return false;
    if (!seen.insert(e.v).second) return false;
    sum += e.w;
  }
  double scale = std::max({std::abs(sum), std::abs(m.total_weight), 1.0});
  return std::abs(sum - m.total_weight) <= tol * scale;
}

}  // namespace mwm
