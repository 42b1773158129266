#include "mwm/compaction.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mwm {

QuantizedWeight quantize(double w, double epsilon) {
  if (!(w > 0.0)) throw std::invalid_argument("quantize: w must be positive");
  if (!(epsilon > 0.0))
    throw std::invalid_argument("quantize: epsilon must be positive");
  double base = std::log1p(epsilon);
  auto k = static_cast<std::int32_t>(std::floor(std::log(w) / base));
  // Guard against floating-point drift at exact powers.
  while (std::pow(1.0 + epsilon, k + 1) <= w) ++k;
  while (std::pow(1.0 + epsilon, k) > w) --k;
  return {k};
}

double dequantize(QuantizedWeight q, double epsilon) {
  return std::pow(1.0 + epsilon, q.exponent);
}

ThresholdFilter::ThresholdFilter(std::uint64_t n_bound, double epsilon)
    : n_bound_(n_bound), epsilon_(epsilon) {
  if (n_bound == 0)
    throw std::invalid_argument("threshold filter needs a positive n bound");
}

double ThresholdFilter::delta() const {
  double n2 = static_cast<double>(n_bound_) * static_cast<double>(n_bound_);
  return epsilon_ * w_max_ / (2.0 * (1.0 + epsilon_) * n2);
}

ThresholdFilter::Verdict ThresholdFilter::inspect(const EdgeRecord& e) {
  if (e.w > w_max_) w_max_ = e.w;
  return e.w < delta() ? Verdict::Drop : Verdict::Keep;
}

CompactPhi::CompactPhi(double epsilon, std::uint64_t n_bound)
    : epsilon_(epsilon) {
  if (!(epsilon > 0.0))
    throw std::invalid_argument("CompactPhi: epsilon must be positive");
  double n2_over_eps =
      static_cast<double>(n_bound) * static_cast<double>(n_bound) / epsilon;
  window_ = static_cast<std::int32_t>(
                std::ceil(std::log(n2_over_eps) / std::log1p(epsilon))) +
            1;
}

void CompactPhi::ensure(VertexId v) {
  if (v >= exact_.size()) {
    std::size_t old = bits_.size();
    exact_.resize(v + 1, 0.0);
    small_mass_.resize(v + 1, 0.0);
    bits_.resize(v + 1);
    for (std::size_t i = old; i < bits_.size(); ++i)
      bits_[i].resize(static_cast<std::size_t>(window_), false);
  }
}

void CompactPhi::slide_window(std::int32_t new_max) {
  std::int32_t shift = new_max - w_max_exponent_;
  for (std::size_t v = 0; v < bits_.size(); ++v) {
    auto& b = bits_[v];
    // Positions are stored as offsets below w_max_exponent_; a slide by
    // `shift` expires the lowest `shift` offsets, folding them out.
    for (std::int32_t off = window_ - 1; off >= window_ - shift; --off) {
      if (off >= 0 && b[static_cast<std::size_t>(off)]) {
        small_mass_[v] +=
            std::pow(1.0 + epsilon_, w_max_exponent_ - off);
      }
    }
    if (shift >= window_) {
      std::fill(b.begin(), b.end(), false);
    } else {
      for (std::int32_t off = window_ - 1; off >= shift; --off)
        b[static_cast<std::size_t>(off)] = b[static_cast<std::size_t>(off - shift)];
      for (std::int32_t off = 0; off < shift; ++off)
        b[static_cast<std::size_t>(off)] = false;
    }
  }
  w_max_exponent_ = new_max;
}

CompactPhi::AddOutcome CompactPhi::add(VertexId v, QuantizedWeight wprime) {
  ensure(v);
  double value = std::pow(1.0 + epsilon_, wprime.exponent);
  exact_[v] += value;

  if (!any_) {
    any_ = true;
    w_max_exponent_ = wprime.exponent;
  } else if (wprime.exponent > w_max_exponent_) {
    slide_window(wprime.exponent);
  }

  std::int32_t off = w_max_exponent_ - wprime.exponent;
  if (off >= window_) {
    small_mass_[v] += value;
    return AddOutcome::BelowWindow;
  }
  auto bit = bits_[v][static_cast<std::size_t>(off)];
  if (bit) {
    // Distinctness violation: fold the duplicate so decoding stays exact.
    ++double_sets_;
    small_mass_[v] += value;
    return AddOutcome::DoubleSet;
  }
  bit = true;
  return AddOutcome::SetBit;
}

double CompactPhi::value(VertexId v) const {
  return v < exact_.size() ? exact_[v] : 0.0;
}

double CompactPhi::decoded(VertexId v) const {
  if (v >= bits_.size()) return 0.0;
  double sum = 0.0;
  for (std::int32_t off = 0; off < window_; ++off)
    if (bits_[v][static_cast<std::size_t>(off)])
      sum += std::pow(1.0 + epsilon_, w_max_exponent_ - off);
  return sum;
}

double CompactPhi::small_mass(VertexId v) const {
  return v < small_mass_.size() ? small_mass_[v] : 0.0;
}

std::uint64_t CompactPhi::bits_set(VertexId v) const {
  if (v >= bits_.size()) return 0;
  std::uint64_t c = 0;
  for (bool b : bits_[v]) c += b ? 1 : 0;
  return c;
}

std::uint64_t CompactPhi::bits_per_vertex() const {
  // Window bits plus one 64-bit small-mass scalar per vertex.
  return static_cast<std::uint64_t>(window_) + 64;
}

}  // namespace mwm
