#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "mwm/certificate.hpp"
#include "mwm/compaction.hpp"
#include "mwm/core.hpp"

namespace mwm {

enum class Mode : std::uint8_t { Basic, Exp, Capped };

enum class PhiBackend : std::uint8_t { Dense, Compact };

// beta = ceil(3*ln(1/eps)/eps) + 1, the per-vertex queue capacity of the
// capped engine. Valid for eps in (0, 1].
std::uint32_t default_beta(double epsilon);

struct EngineConfig {
  Mode mode = Mode::Exp;
  double epsilon = 0.25;
  std::optional<std::uint32_t> beta_override;
  bool trace_enabled = false;

  // Compaction pipeline (off by default).
  bool quantize = false;
  std::optional<std::uint32_t> threshold_n;
  PhiBackend phi_backend = PhiBackend::Dense;

  std::uint32_t beta() const;
  // Throws std::invalid_argument on an inconsistent configuration.
  void validate() const;
};

// One-pass local-ratio matching engine over a stream of dense-id edges.
// A single instance is strictly sequential.
class StreamEngine {
 public:
  explicit StreamEngine(EngineConfig cfg);

  // Processes one stream edge. Returns the decision taken for it
  // (evictions it triggers are reported via the trace, not here).
  Decision process_edge(const EdgeRecord& e);

  // Unwinds the live stack last-pushed-first into a greedy matching.
  // Terminal: the engine is consumed; a second call throws.
  Matching finalize();

  double phi(VertexId v) const;
  std::vector<double> phi_vector() const;
  const StreamStats& stats() const { return stats_; }
  const std::vector<TraceEvent>& trace() const { return trace_; }
  const EngineConfig& config() const { return cfg_; }
  std::uint64_t live_stack_size() const { return live_; }
  VertexId vertex_count() const;

  // Present iff phi_backend == Compact.
  const CompactPhi* compact_phi() const;
  // Edges dropped by the delta-threshold filter (quantize pipeline).
  std::uint64_t edges_thresholded() const { return thresholded_; }

 private:
  struct StackEntry {
    EdgeRecord edge;
    double leftover = 0.0;
    std::uint64_t push_seq = 0;
    bool alive = true;
  };

  void ensure_vertex(VertexId v);
  void evict_overflow(VertexId x, const EdgeRecord& evictor,
                      std::uint64_t evictor_seq, double evictor_leftover);
  void compact_stack();

  EngineConfig cfg_;
  std::uint32_t beta_ = 0;
  bool finalized_ = false;

  std::vector<double> phi_;
  std::optional<CompactPhi> cphi_;
  std::optional<ThresholdFilter> filter_;
  std::uint64_t thresholded_ = 0;

  std::vector<StackEntry> stack_;
  std::unordered_map<std::uint64_t, std::size_t> stack_pos_;  // push_seq -> index
  std::vector<std::deque<std::uint64_t>> queues_;             // push_seqs
  std::uint64_t live_ = 0;
  std::uint64_t dead_ = 0;
  std::uint64_t next_seq_ = 0;

  StreamStats stats_;
  std::vector<TraceEvent> trace_;
};

struct RunResult {
  Matching matching;
  DualCertificate certificate;
  StreamStats stats;
  std::vector<TraceEvent> trace;  // empty unless cfg.trace_enabled
  std::uint64_t edges_thresholded = 0;
};

RunResult run_stream(std::span<const EdgeRecord> edges, const EngineConfig& cfg);

}  // namespace mwm
