#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace mwm {

using VertexId = std::uint32_t;

// Relative tolerance used by all verification-side inequality checks.
inline constexpr double kTol = 1e-9;

struct EdgeRecord {
  VertexId u = 0;
  VertexId v = 0;
  double w = 0.0;

  bool operator==(const EdgeRecord&) const = default;
};

struct Matching {
  std::vector<EdgeRecord> edges;
  double total_weight = 0.0;
};

// Checks vertex-disjointness and weight consistency in O(|M|).
bool matching_valid(const Matching& m, double tol = kTol);

struct StreamStats {
  std::uint64_t edges_seen = 0;
  std::uint64_t edges_pushed = 0;
  std::uint64_t edges_skipped = 0;
  std::uint64_t edges_evicted = 0;
  std::uint64_t peak_stack_size = 0;
  std::uint64_t peak_queue_size = 0;
  std::vector<std::uint32_t> per_vertex_push_counts;
  double w_max_seen = 0.0;
  // Smallest leftover weight among pushed edges; defines the effective
  // weight range W = w_max_seen / w_min_leftover for the space bounds.
  double w_min_leftover = std::numeric_limits<double>::infinity();
};

enum class Decision : std::uint8_t { Skipped, Pushed, Evicted };

struct TraceEvent {
  std::uint64_t seq = 0;
  Decision decision = Decision::Skipped;
  EdgeRecord edge;  // inspected edge, or the victim for Evicted events

  // Pushed
  double leftover = 0.0;
  double phi_u_before = 0.0;
  double phi_v_before = 0.0;

  // Evicted
  std::uint64_t victim_seq = 0;   // seq of the victim's Pushed event
  std::uint64_t evictor_seq = 0;  // seq of the evictor's Pushed event
  EdgeRecord evictor;
  double victim_leftover = 0.0;
  double evictor_leftover = 0.0;
};

// Maps arbitrary external vertex ids onto a dense 0..k-1 range.
// Injective by construction; single-writer.
class VertexRemap {
 public:
  VertexId map(std::uint64_t raw_id) {
    auto [it, inserted] = table_.try_emplace(raw_id, next_);
    if (inserted) {
      raw_.push_back(raw_id);
      ++next_;
    }
    return it->second;
  }

  VertexId size() const { return next_; }
  std::uint64_t raw_of(VertexId v) const { return raw_.at(v); }

 private:
  std::unordered_map<std::uint64_t, VertexId> table_;
  std::vector<std::uint64_t> raw_;
  VertexId next_ = 0;
};

}  // namespace mwm
