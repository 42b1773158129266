#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mwm/core.hpp"

namespace mwm {

inline constexpr std::uint32_t kOracleVertexCap = 24;

struct SmallGraph {
  std::uint32_t n = 0;
  std::vector<EdgeRecord> edges;
};

// Exact maximum-weight matching by bitmask DP over vertex subsets.
// Throws std::invalid_argument if g.n exceeds kOracleVertexCap.
Matching exact_mwm(const SmallGraph& g);

// Offline greedy: edges sorted by weight descending (ties by (u,v)
// lexicographic), added if both endpoints are free. 2-approximate.
Matching offline_greedy(const SmallGraph& g);

enum class StreamModel : std::uint8_t {
  GnmRandom,
  Complete,
  Bipartite,
  Path,
  Star,
  EvictionAdversary,
};

enum class WeightLaw : std::uint8_t { Uniform, PowersOf, Constant };

enum class ArrivalOrder : std::uint8_t {
  ArrivalRandom,
  WeightIncreasing,
  WeightDecreasing,
};

struct StreamSpec {
  StreamModel model = StreamModel::GnmRandom;
  std::uint32_t n = 0;
  std::uint64_t m = 0;  // ignored by complete/path/star/eviction_adversary
  WeightLaw weight_law = WeightLaw::Uniform;
  double w_max = 100.0;    // Uniform: weights in [1, w_max]
  double epsilon = 0.25;   // PowersOf base and adversary growth parameter
  ArrivalOrder order = ArrivalOrder::ArrivalRandom;
  std::uint64_t seed = 0;
};

// Deterministic: the same spec yields the same stream byte-for-byte.
// PRNG: std::mt19937_64 seeded with spec.seed (pinned; see README).
// Throws std::invalid_argument on inconsistent specs (e.g. m too large
// for a simple model).
std::vector<EdgeRecord> generate_stream(const StreamSpec& spec);

std::string model_name(StreamModel m);
std::string weight_law_name(WeightLaw w);
std::string order_name(ArrivalOrder o);

}  // namespace mwm
