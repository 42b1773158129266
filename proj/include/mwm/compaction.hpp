#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mwm/core.hpp"

namespace mwm {

struct QuantizedWeight {
  std::int32_t exponent = 0;  // weight = (1+eps)^exponent
};

// Largest integer k with (1+eps)^k <= w (round weight down to a power).
QuantizedWeight quantize(double w, double epsilon);

double dequantize(QuantizedWeight q, double epsilon);

// Growth of the skip threshold caused by rounding weights down:
// verification of quantized runs uses eps_eff = (1+eps)^2 - 1.
inline double effective_epsilon(double epsilon) {
  return (1.0 + epsilon) * (1.0 + epsilon) - 1.0;
}

// Tracks the running maximum weight and drops edges below
// delta = eps * W_max / (2 (1+eps) n^2). Needs n (or an upper bound).
class ThresholdFilter {
 public:
  ThresholdFilter(std::uint64_t n_bound, double epsilon);

  enum class Verdict : std::uint8_t { Keep, Drop };
  Verdict inspect(const EdgeRecord& e);

  double delta() const;
  double w_max() const { return w_max_; }

 private:
  std::uint64_t n_bound_;
  double epsilon_;
  double w_max_ = 0.0;
};

// Per-vertex potentials stored as bit arrays over (1+eps)-power exponents,
// restricted to a sliding window of width L = ceil(log_{1+eps}(n^2/eps))
// below the largest exponent seen. Additions below the window, bits that
// expire when the window slides, and double-set collisions all fold their
// exact value into a per-vertex small-mass scalar, so
//   decoded(v) + small_mass(v) == exact phi_v   (bit-exactly, by
// construction; the exact values are kept as a shadow vector).
class CompactPhi {
 public:
  CompactPhi(double epsilon, std::uint64_t n_bound);

  enum class AddOutcome : std::uint8_t { SetBit, BelowWindow, DoubleSet };
  AddOutcome add(VertexId v, QuantizedWeight wprime);

  double value(VertexId v) const;       // exact phi_v (shadow)
  double decoded(VertexId v) const;     // sum over set bits only
  double small_mass(VertexId v) const;  // folded mass for v

  std::int32_t w_max_exponent() const { return w_max_exponent_; }
  std::int32_t window_width() const { return window_; }
  std::uint64_t double_set_count() const { return double_sets_; }
  std::uint64_t bits_set(VertexId v) const;
  std::size_t size() const { return exact_.size(); }
  void ensure(VertexId v);

  // Measured footprint of the bit representation, for space reports.
  std::uint64_t bits_per_vertex() const;

 private:
  void slide_window(std::int32_t new_max);

  double epsilon_;
  std::int32_t window_;
  bool any_ = false;
  std::int32_t w_max_exponent_ = 0;
  std::vector<std::vector<bool>> bits_;  // indexed [v][w_max_exponent_ - k]
  std::vector<double> small_mass_;
  std::vector<double> exact_;
  std::uint64_t double_sets_ = 0;
};

}  // namespace mwm
