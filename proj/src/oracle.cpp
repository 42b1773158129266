#include "mwm/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <stdexcept>

namespace mwm {

Matching exact_mwm(const SmallGraph& g) {
  if (g.n > kOracleVertexCap)
    throw std::invalid_argument("exact_mwm: vertex count over cap");
  for (const auto& e : g.edges)
    if (e.u >= g.n || e.v >= g.n)
      throw std::invalid_argument("exact_mwm: endpoint out of range");

  const std::uint32_t n = g.n;
  std::vector<std::vector<std::pair<VertexId, double>>> adj(n);
  // Keep only the heaviest parallel edge per pair; matchings never use two.
  std::vector<std::size_t> best_edge_idx;
  {
    std::map<std::pair<VertexId, VertexId>, std::size_t> best;
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
      const auto& e = g.edges[i];
      auto key = std::minmax(e.u, e.v);
      auto [it, ins] = best.emplace(std::pair{key.first, key.second}, i);
      if (!ins && g.edges[i].w > g.edges[it->second].w) it->second = i;
    }
    for (auto& [key, idx] : best) {
      adj[key.first].push_back({key.second, g.edges[idx].w});
      best_edge_idx.push_back(idx);
    }
  }

  const std::size_t states = std::size_t{1} << n;
  std::vector<double> best(states, 0.0);
  for (std::size_t mask = 1; mask < states; ++mask) {
    auto v = static_cast<VertexId>(std::countr_zero(mask));
    std::size_t rest = mask & (mask - 1);  // v left unmatched
    // v is the lowest set bit, so every edge incident on v inside mask
    // lives in adj[v] (adjacency keyed by the smaller endpoint).
    double b = best[rest];
    for (auto [u, w] : adj[v])
      if (mask >> u & 1) b = std::max(b, w + best[rest & ~(std::size_t{1} << u)]);
    best[mask] = b;
  }

  // Reconstruct by re-deriving which transition achieves best[mask].
  Matching m;
  std::size_t mask = states - 1;
  while (mask) {
    auto v = static_cast<VertexId>(std::countr_zero(mask));
    std::size_t rest = mask & (mask - 1);
    if (best[mask] == best[rest]) {
      mask = rest;
      continue;
    }
    bool advanced = false;
    for (auto [u, w] : adj[v]) {
      if (!(mask >> u & 1)) continue;
      std::size_t next = rest & ~(std::size_t{1} << u);
      if (best[mask] == w + best[next]) {
        m.edges.push_back({v, u, w});
        m.total_weight += w;
        mask = next;
        advanced = true;
        break;
      }
    }
    if (!advanced) mask = rest;
  }
  return m;
}

Matching offline_greedy(const SmallGraph& g) {
  std::vector<EdgeRecord> sorted = g.edges;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const EdgeRecord& a, const EdgeRecord& b) {
                     if (a.w != b.w) return a.w > b.w;
                     if (a.u != b.u) return a.u < b.u;
                     return a.v < b.v;
                   });
  Matching m;
  std::vector<bool> matched(g.n, false);
  for (const auto& e : sorted) {
    if (e.u == e.v || matched[e.u] || matched[e.v]) continue;
    matched[e.u] = true;
    matched[e.v] = true;
    m.edges.push_back(e);
    m.total_weight += e.w;
  }
  return m;
}

namespace {

std::vector<std::pair<VertexId, VertexId>> make_topology(const StreamSpec& s,
                                                         std::mt19937_64& rng) {
  std::vector<std::pair<VertexId, VertexId>> pairs;
  auto require = [](bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
  };
  switch (s.model) {
    case StreamModel::GnmRandom: {
      require(s.n >= 2, "gnm_random needs n >= 2");
      std::uint64_t max_m = std::uint64_t{s.n} * (s.n - 1) / 2;
      require(s.m <= max_m, "gnm_random: m exceeds n(n-1)/2");
      std::set<std::pair<VertexId, VertexId>> used;
      std::uniform_int_distribution<VertexId> pick(0, s.n - 1);
      while (used.size() < s.m) {
        VertexId a = pick(rng), b = pick(rng);
        if (a == b) continue;
        used.insert({std::min(a, b), std::max(a, b)});
      }
      // Emit in randomized order, not set order.
      pairs.assign(used.begin(), used.end());
      std::shuffle(pairs.begin(), pairs.end(), rng);
      break;
    }
    case StreamModel::Complete: {
      require(s.n >= 2, "complete needs n >= 2");
      for (VertexId u = 0; u < s.n; ++u)
        for (VertexId v = u + 1; v < s.n; ++v) pairs.push_back({u, v});
      break;
    }
    case StreamModel::Bipartite: {
      require(s.n >= 2, "bipartite needs n >= 2");
      VertexId left = s.n / 2;
      std::uint64_t max_m = std::uint64_t{left} * (s.n - left);
      require(s.m <= max_m, "bipartite: m exceeds |L|*|R|");
      std::set<std::pair<VertexId, VertexId>> used;
      std::uniform_int_distribution<VertexId> pl(0, left - 1);
      std::uniform_int_distribution<VertexId> pr(left, s.n - 1);
      while (used.size() < s.m) used.insert({pl(rng), pr(rng)});
      pairs.assign(used.begin(), used.end());
      std::shuffle(pairs.begin(), pairs.end(), rng);
      break;
    }
    case StreamModel::Path:
      require(s.n >= 2, "path needs n >= 2");
      for (VertexId v = 0; v + 1 < s.n; ++v) pairs.push_back({v, v + 1});
      break;
    case StreamModel::Star:
      require(s.n >= 2, "star needs n >= 2");
      for (VertexId v = 1; v < s.n; ++v) pairs.push_back({0, v});
      break;
    case StreamModel::EvictionAdversary:
      break;  // builds its own weights, handled by the caller
  }
  return pairs;
}

std::uint32_t adversary_beta(double epsilon) {
  double raw = 3.0 * std::log(1.0 / epsilon) / epsilon;
  return static_cast<std::uint32_t>(std::ceil(raw)) + 1;
}

// One hub; beta+2 incident edges whose weights grow fast enough that every
// edge is pushed, overflowing Q(hub). Growth just above (1+eps)^beta when
// that stays in double range, else a flat factor of 3 (still pushes every
// edge for eps <= 1).
std::vector<EdgeRecord> adversary_stream(const StreamSpec& s) {
  if (s.n < 2)
    throw std::invalid_argument("eviction_adversary needs n >= 2");
  std::uint32_t beta = adversary_beta(s.epsilon);
  std::uint64_t count = std::uint64_t{beta} + 2;
  double factor = std::pow(1.0 + s.epsilon, beta) * 1.01;
  if (static_cast<double>(count + 1) * std::log10(factor) > 280.0) factor = 3.0;

  std::vector<EdgeRecord> edges;
  edges.reserve(count);
  double w = 1.0;
  VertexId spoke = 1;
  for (std::uint64_t i = 0; i < count; ++i) {
    edges.push_back({0, spoke, w});
    w *= factor;
    if (++spoke >= s.n) spoke = 1;  // parallel edges are legal stream content
  }
  return edges;
}

}  // namespace

std::vector<EdgeRecord> generate_stream(const StreamSpec& spec) {
  std::mt19937_64 rng(spec.seed);
  if (spec.model == StreamModel::EvictionAdversary)
    return adversary_stream(spec);

  auto pairs = make_topology(spec, rng);
  std::vector<EdgeRecord> edges;
  edges.reserve(pairs.size());
  switch (spec.weight_law) {
    case WeightLaw::Uniform: {
      if (!(spec.w_max >= 1.0))
        throw std::invalid_argument("uniform weight law needs w_max >= 1");
      std::uniform_real_distribution<double> dist(1.0, spec.w_max);
      for (auto [u, v] : pairs) edges.push_back({u, v, dist(rng)});
      break;
    }
    case WeightLaw::PowersOf: {
      if (!(spec.epsilon > 0.0))
        throw std::invalid_argument("powers_of weight law needs epsilon > 0");
      double kmax = std::max(
          1.0, std::ceil(std::log(std::max(spec.w_max, 1.0 + spec.epsilon)) /
                         std::log1p(spec.epsilon)));
      std::uniform_int_distribution<std::int64_t> dist(
          0, static_cast<std::int64_t>(kmax));
      for (auto [u, v] : pairs)
        edges.push_back({u, v, std::pow(1.0 + spec.epsilon,
                                        static_cast<double>(dist(rng)))});
      break;
    }
    case WeightLaw::Constant:
      for (auto [u, v] : pairs) edges.push_back({u, v, 1.0});
      break;
  }

  switch (spec.order) {
    case ArrivalOrder::ArrivalRandom:
      std::shuffle(edges.begin(), edges.end(), rng);
      break;
    case ArrivalOrder::WeightIncreasing:
      std::stable_sort(edges.begin(), edges.end(),
                       [](auto& a, auto& b) { return a.w < b.w; });
      break;
    case ArrivalOrder::WeightDecreasing:
      std::stable_sort(edges.begin(), edges.end(),
                       [](auto& a, auto& b) { return a.w > b.w; });
      break;
  }
  return edges;
}

std::string model_name(StreamModel m) {
  switch (m) {
    case StreamModel::GnmRandom: return "gnm_random";
    case StreamModel::Complete: return "complete";
    case StreamModel::Bipartite: return "bipartite";
    case StreamModel::Path: return "path";
    case StreamModel::Star: return "star";
    case StreamModel::EvictionAdversary: return "eviction_adversary";
  }
  return "?";
}

std::string weight_law_name(WeightLaw w) {
  switch (w) {
    case WeightLaw::Uniform: return "uniform";
    case WeightLaw::PowersOf: return "powers_of";
    case WeightLaw::Constant: return "constant";
  }
  return "?";
}

std::string order_name(ArrivalOrder o) {
  switch (o) {
    case ArrivalOrder::ArrivalRandom: return "arrival_random";
    case ArrivalOrder::WeightIncreasing: return "weight_increasing";
    case ArrivalOrder::WeightDecreasing: return "weight_decreasing";
  }
  return "?";
}

}  // namespace mwm
