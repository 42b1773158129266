#include "mwm/certificate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

namespace mwm {

DualCertificate make_certificate(std::vector<double> phi, double epsilon) {
  DualCertificate cert;
  cert.phi = std::move(phi);
  cert.epsilon = epsilon;
  cert.phi_sum = std::accumulate(cert.phi.begin(), cert.phi.end(), 0.0);
  return cert;
}

double upper_bound(const DualCertificate& cert) {
  return (1.0 + cert.epsilon) * cert.phi_sum;
}

void CheckReport::record(double margin, const std::string& what,
                         double tol_margin) {
  ++items_checked;
  worst_slack = std::min(worst_slack, margin);
  if (margin < -tol_margin) {
    ok = false;
    if (offenders.size() < 16) offenders.push_back(what);
  }
}

CheckReport check_dual_feasible(const DualCertificate& cert,
                                std::span<const EdgeRecord> edges,
                                double tol) {
  CheckReport rep{.name = "dual_feasible"};
  const double scale = 1.0 + cert.epsilon;
  for (const auto& e : edges) {
    double pu = e.u < cert.phi.size() ? cert.phi[e.u] : 0.0;
    double pv = e.v < cert.phi.size() ? cert.phi[e.v] : 0.0;
    double margin = scale * (pu + pv) - e.w;
    rep.record(margin / std::max(e.w, 1.0),
               "edge {" + std::to_string(e.u) + "," + std::to_string(e.v) +
                   "} w=" + std::to_string(e.w) +
                   " exceeds (1+eps)(phi_u+phi_v)=" +
                   std::to_string(scale * (pu + pv)),
               tol);
  }
  return rep;
}

CheckReport check_push_lemma(std::span<const TraceEvent> trace, double tol) {
  CheckReport rep{.name = "push_lemma"};
  // acc[v] accumulates leftovers of pushed edges incident on v, which is
  // exactly phi_v: the sum over preceding neighbors (double-counting
  // parallels, which only strengthens the check).
  std::unordered_map<VertexId, double> acc;
  for (const auto& ev : trace) {
    if (ev.decision != Decision::Pushed) continue;
    double sum = acc[ev.edge.u] + acc[ev.edge.v] + ev.leftover;
    double margin = ev.edge.w - sum;
    rep.record(margin / std::max(ev.edge.w, 1.0),
               "pushed edge seq " + std::to_string(ev.seq) + " w=" +
                   std::to_string(ev.edge.w) + " < preceding leftover sum " +
                   std::to_string(sum),
               tol);
    // Cross-check the recorded pre-push potentials against replay.
    double drift = std::max(std::abs(acc[ev.edge.u] - ev.phi_u_before),
                            std::abs(acc[ev.edge.v] - ev.phi_v_before));
    rep.record(-drift / std::max(ev.edge.w, 1.0),
               "seq " + std::to_string(ev.seq) +
                   ": recorded phi-before drifts from replay by " +
                   std::to_string(drift),
               tol);
    acc[ev.edge.u] += ev.leftover;
    acc[ev.edge.v] += ev.leftover;
  }
  return rep;
}

CheckReport check_eviction_ratio(std::span<const TraceEvent> trace,
                                 double epsilon, double tol) {
  CheckReport rep{.name = "eviction_ratio"};
  for (const auto& ev : trace) {
    if (ev.decision != Decision::Evicted) continue;
    double required = ev.victim_leftover / epsilon;
    double margin = ev.evictor_leftover - required;
    rep.record(margin / std::max(required, 1.0),
               "eviction at seq " + std::to_string(ev.seq) +
                   ": evictor leftover " + std::to_string(ev.evictor_leftover) +
                   " < victim leftover / " + std::to_string(epsilon),
               tol);
  }
  return rep;
}

CheckReport check_phi_identity(std::span<const TraceEvent> trace,
                               const DualCertificate& cert, double tol) {
  CheckReport rep{.name = "phi_identity"};
  double twice_leftovers = 0.0;
  std::uint64_t pushes = 0;
  for (const auto& ev : trace) {
    if (ev.decision != Decision::Pushed) continue;
    twice_leftovers += 2.0 * ev.leftover;
    ++pushes;
  }
  double scale = std::max({std::abs(cert.phi_sum), 1.0});
  double err = std::abs(twice_leftovers - cert.phi_sum) / scale;
  rep.record(-err, "sum of 2*leftover = " + std::to_string(twice_leftovers) +
                         " but phi_sum = " + std::to_string(cert.phi_sum),
             tol * std::max<double>(pushes, 1));
  return rep;
}

DiscardForest build_discard_forest(std::span<const TraceEvent> trace) {
  std::unordered_map<std::uint64_t, std::uint64_t> evicted_by;
  for (const auto& ev : trace)
    if (ev.decision == Decision::Evicted)
      evicted_by[ev.victim_seq] = ev.evictor_seq;

  DiscardForest forest;
  for (const auto& [victim, evictor] : evicted_by) {
    std::uint64_t terminal = evictor;
    for (auto it = evicted_by.find(terminal); it != evicted_by.end();
         it = evicted_by.find(terminal))
      terminal = it->second;
    forest.discarded_by[terminal].push_back(victim);
  }
  for (auto& [kept, victims] : forest.discarded_by)
    std::sort(victims.begin(), victims.end());
  return forest;
}

CheckReport check_discard_sums(const DiscardForest& forest,
                               std::span<const TraceEvent> trace,
                               double epsilon, double tol) {
  CheckReport rep{.name = "discard_sums"};
  std::unordered_map<std::uint64_t, double> leftover_of;
  for (const auto& ev : trace)
    if (ev.decision == Decision::Pushed) leftover_of[ev.seq] = ev.leftover;

  for (const auto& [kept, victims] : forest.discarded_by) {
    double sum = 0.0;
    for (std::uint64_t v : victims) sum += leftover_of.at(v);
    double bound = 4.0 * epsilon * leftover_of.at(kept);
    rep.record((bound - sum) / std::max(bound, 1.0),
               "kept seq " + std::to_string(kept) + ": discarded leftover sum " +
                   std::to_string(sum) + " > 4*eps*w' = " +
                   std::to_string(bound),
               tol);
  }
  return rep;
}

}  // namespace mwm
