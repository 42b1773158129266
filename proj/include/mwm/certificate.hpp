#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "mwm/core.hpp"

namespace mwm {

// Final per-vertex potentials of a run. Scaled by (1+eps) they form a
// feasible solution to the dual of the matching LP, so
// OPT <= (1+eps) * phi_sum.
struct DualCertificate {
  std::vector<double> phi;
  double epsilon = 0.0;
  double phi_sum = 0.0;
};

DualCertificate make_certificate(std::vector<double> phi, double epsilon);

// (1+eps) * phi_sum, an upper bound on the weight of any matching.
double upper_bound(const DualCertificate& cert);

struct CheckReport {
  std::string name;
  bool ok = true;
  double worst_slack = 0.0;  // most negative margin seen (>= 0 means clean)
  std::uint64_t items_checked = 0;
  std::vector<std::string> offenders;

  void record(double margin, const std::string& what, double tol_margin);
};

// Replays the full stream against the final potentials:
// w_e <= (1+eps)(phi_u + phi_v) + tol*w_e for every edge.
CheckReport check_dual_feasible(const DualCertificate& cert,
                                std::span<const EdgeRecord> edges,
                                double tol = kTol);

// For every pushed e = {u,v}: w_e >= sum of leftovers of previously pushed
// edges sharing u or v, plus e's own leftover (tight up to parallel edges).
CheckReport check_push_lemma(std::span<const TraceEvent> trace,
                             double tol = kTol);

// Every eviction satisfies leftover(evictor) >= leftover(victim)/eps.
CheckReport check_eviction_ratio(std::span<const TraceEvent> trace,
                                 double epsilon, double tol = kTol);

// End-of-run identity: sum over pushes of 2*leftover == sum_v phi_v.
CheckReport check_phi_identity(std::span<const TraceEvent> trace,
                               const DualCertificate& cert, double tol = kTol);

// Kept-edge push_seq -> push_seqs of all edges whose eviction chain
// terminates at it (the transitive "discarded by" relation).
struct DiscardForest {
  std::map<std::uint64_t, std::vector<std::uint64_t>> discarded_by;
};

DiscardForest build_discard_forest(std::span<const TraceEvent> trace);

// For every kept edge e: sum of leftovers over D(e) <= 4*eps*leftover(e).
CheckReport check_discard_sums(const DiscardForest& forest,
                               std::span<const TraceEvent> trace,
                               double epsilon, double tol = kTol);

}  // namespace mwm
