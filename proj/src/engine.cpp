#include "mwm/engine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mwm {

std::uint32_t default_beta(double epsilon) {
  if (!(epsilon > 0.0) || epsilon > 1.0)
    throw std::invalid_argument("default_beta: epsilon must be in (0, 1]");
  double raw = 3.0 * std::log(1.0 / epsilon) / epsilon;
  return static_cast<std::uint32_t>(std::ceil(raw)) + 1;
}

std::uint32_t EngineConfig::beta() const {
  if (beta_override) return *beta_override;
  return default_beta(epsilon);
}

void EngineConfig::validate() const {
  switch (mode) {
    case Mode::Basic:
      if (epsilon != 0.0)
        throw std::invalid_argument("mode=basic forces epsilon=0");
      break;
    case Mode::Exp:
      if (!(epsilon > 0.0))
        throw std::invalid_argument("mode=exp requires epsilon > 0");
      break;
    case Mode::Capped:
      if (!(epsilon > 0.0) || epsilon > 0.25)
        throw std::invalid_argument("mode=capped requires epsilon in (0, 1/4]");
      if (beta_override && *beta_override == 0)
        throw std::invalid_argument("beta override must be positive");
      break;
  }
  if (quantize && !(epsilon > 0.0))
    throw std::invalid_argument("quantize requires epsilon > 0");
  if (phi_backend == PhiBackend::Compact) {
    if (!quantize)
      throw std::invalid_argument("compact phi backend requires --quantize");
    if (!threshold_n)
      throw std::invalid_argument("compact phi backend requires an n bound");
  }
}

StreamEngine::StreamEngine(EngineConfig cfg) : cfg_(cfg) {
  cfg_.validate();
  if (cfg_.mode == Mode::Capped) beta_ = cfg_.beta();
  if (cfg_.quantize && cfg_.threshold_n)
    filter_.emplace(*cfg_.threshold_n, cfg_.epsilon);
  if (cfg_.phi_backend == PhiBackend::Compact)
    cphi_.emplace(cfg_.epsilon, *cfg_.threshold_n);
}

void StreamEngine::ensure_vertex(VertexId v) {
  if (v >= phi_.size()) {
    phi_.resize(v + 1, 0.0);
    stats_.per_vertex_push_counts.resize(v + 1, 0);
    if (cfg_.mode == Mode::Capped) queues_.resize(v + 1);
    if (cphi_) cphi_->ensure(v);
  }
}

double StreamEngine::phi(VertexId v) const {
  return v < phi_.size() ? phi_[v] : 0.0;
}

std::vector<double> StreamEngine::phi_vector() const { return phi_; }

VertexId StreamEngine::vertex_count() const {
  return static_cast<VertexId>(phi_.size());
}

const CompactPhi* StreamEngine::compact_phi() const {
  return cphi_ ? &*cphi_ : nullptr;
}

Decision StreamEngine::process_edge(const EdgeRecord& e) {
  if (finalized_) throw std::logic_error("process_edge after finalize");
  if (e.u == e.v || !(e.w > 0.0))
    throw std::invalid_argument("malformed edge record");

  EdgeRecord edge = e;
  if (cfg_.quantize)
    edge.w = dequantize(quantize(edge.w, cfg_.epsilon), cfg_.epsilon);

  if (filter_ && filter_->inspect(edge) == ThresholdFilter::Verdict::Drop) {
    ++thresholded_;
    return Decision::Skipped;
  }

  ++stats_.edges_seen;
  stats_.w_max_seen = std::max(stats_.w_max_seen, edge.w);
  ensure_vertex(edge.u);
  ensure_vertex(edge.v);

  const double pu = phi_[edge.u];
  const double pv = phi_[edge.v];
  const std::uint64_t seq = next_seq_++;

  // Line 4: skip if the edge is already (1+eps)-covered. Equality pushes.
  if (edge.w < (1.0 + cfg_.epsilon) * (pu + pv)) {
    ++stats_.edges_skipped;
    if (cfg_.trace_enabled)
      trace_.push_back({.seq = seq, .decision = Decision::Skipped, .edge = edge});
    return Decision::Skipped;
  }

  double leftover = edge.w - (pu + pv);
  if (cphi_) {
    // The compact backend adds powers of (1+eps): round the leftover down
    // and use the rounded value everywhere so the bit array stays exact.
    if (leftover > 0.0) {
      QuantizedWeight q = quantize(leftover, cfg_.epsilon);
      leftover = dequantize(q, cfg_.epsilon);
      cphi_->add(edge.u, q);
      cphi_->add(edge.v, q);
    }
  }
  phi_[edge.u] = pu + leftover;
  phi_[edge.v] = pv + leftover;

  ++stats_.edges_pushed;
  ++stats_.per_vertex_push_counts[edge.u];
  ++stats_.per_vertex_push_counts[edge.v];
  if (leftover > 0.0)
    stats_.w_min_leftover = std::min(stats_.w_min_leftover, leftover);

  stack_.push_back({edge, leftover, seq, true});
  stack_pos_.emplace(seq, stack_.size() - 1);
  ++live_;
  stats_.peak_stack_size = std::max(stats_.peak_stack_size, live_);

  if (cfg_.trace_enabled)
    trace_.push_back({.seq = seq,
                      .decision = Decision::Pushed,
                      .edge = edge,
                      .leftover = leftover,
                      .phi_u_before = pu,
                      .phi_v_before = pv});

  if (cfg_.mode == Mode::Capped) {
    for (VertexId x : {edge.u, edge.v}) {
      queues_[x].push_back(seq);
      if (queues_[x].size() > beta_) evict_overflow(x, edge, seq, leftover);
      stats_.peak_queue_size =
          std::max<std::uint64_t>(stats_.peak_queue_size, queues_[x].size());
    }
    if (dead_ > live_) compact_stack();
  }
  return Decision::Pushed;
}

void StreamEngine::evict_overflow(VertexId x, const EdgeRecord& evictor,
                                  std::uint64_t evictor_seq,
                                  double evictor_leftover) {
  std::uint64_t victim_seq = queues_[x].front();
  queues_[x].pop_front();
  auto it = stack_pos_.find(victim_seq);
  // A stale queue entry: the edge was already evicted via its other
  // endpoint. Dequeuing it is all the pseudocode's removal amounts to.
  if (it == stack_pos_.end() || !stack_[it->second].alive) return;

  StackEntry& victim = stack_[it->second];
  victim.alive = false;
  --live_;
  ++dead_;
  ++stats_.edges_evicted;
  if (cfg_.trace_enabled)
    trace_.push_back({.seq = next_seq_++,
                      .decision = Decision::Evicted,
                      .edge = victim.edge,
                      .victim_seq = victim.push_seq,
                      .evictor_seq = evictor_seq,
                      .evictor = evictor,
                      .victim_leftover = victim.leftover,
                      .evictor_leftover = evictor_leftover});
}

void StreamEngine::compact_stack() {
  std::vector<StackEntry> kept;
  kept.reserve(live_);
  for (auto& entry : stack_)
    if (entry.alive) kept.push_back(entry);
  stack_.swap(kept);
  stack_pos_.clear();
  for (std::size_t i = 0; i < stack_.size(); ++i)
    stack_pos_.emplace(stack_[i].push_seq, i);
  dead_ = 0;
}

Matching StreamEngine::finalize() {
  if (finalized_) throw std::logic_error("finalize called twice");
  finalized_ = true;

  Matching m;
  std::vector<bool> matched(phi_.size(), false);
  for (auto it = stack_.rbegin(); it != stack_.rend(); ++it) {
    if (!it->alive) continue;
    const EdgeRecord& e = it->edge;
    if (!matched[e.u] && !matched[e.v]) {
      matched[e.u] = true;
      matched[e.v] = true;
      m.edges.push_back(e);
      m.total_weight += e.w;
    }
  }
  return m;
}

RunResult run_stream(std::span<const EdgeRecord> edges,
                     const EngineConfig& cfg) {
  StreamEngine engine(cfg);
  for (const auto& e : edges) engine.process_edge(e);
  RunResult r;
  r.certificate = make_certificate(engine.phi_vector(), cfg.epsilon);
  r.matching = engine.finalize();
  r.stats = engine.stats();
  r.trace = engine.trace();
  r.edges_thresholded = engine.edges_thresholded();
  return r;
}

}  // namespace mwm
