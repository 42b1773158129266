#include <doctest.h>

#include <cmath>
#include <set>

#include "helpers.hpp"
#include "mwm/certificate.hpp"
#include "mwm/engine.hpp"
#include "mwm/oracle.hpp"

using namespace mwm;

namespace {
EngineConfig traced(Mode mode, double eps) {
  return {.mode = mode, .epsilon = eps, .trace_enabled = true};
}
}  // namespace

TEST_CASE("dual feasibility on hand instances") {
  SUBCASE("single pushed edge") {
    DualCertificate cert = make_certificate({5.0, 5.0}, 0.0);
    std::vector<EdgeRecord> edges{{0, 1, 5.0}};
    CHECK(check_dual_feasible(cert, edges).ok);  // 5 <= 10
  }
  SUBCASE("skipped edge satisfies the constraint by the skip test") {
    DualCertificate cert = make_certificate({5.0, 5.0, 0.0}, 0.5);
    std::vector<EdgeRecord> edges{{0, 2, 5.0}};
    CHECK(check_dual_feasible(cert, edges).ok);  // 5 < 7.5
  }
  SUBCASE("violation is reported with the offending edge") {
    DualCertificate cert = make_certificate({1.0, 1.0}, 0.0);
    std::vector<EdgeRecord> edges{{0, 1, 5.0}};
    auto rep = check_dual_feasible(cert, edges);
    CHECK_FALSE(rep.ok);
    CHECK(rep.worst_slack < 0.0);
    REQUIRE(rep.offenders.size() == 1);
  }
}

TEST_CASE("upper_bound") {
  CHECK(upper_bound(make_certificate({}, 0.5)) == 0.0);
  // path example: phi = (1, 2, 1), eps = 0
  DualCertificate cert = make_certificate({1.0, 2.0, 1.0}, 0.0);
  CHECK(upper_bound(cert) == 4.0);
  Matching opt = exact_mwm({3, {{0, 1, 1.0}, {1, 2, 2.0}}});
  CHECK(opt.total_weight <= upper_bound(cert));
}

TEST_CASE("push lemma on the path example is tight") {
  auto r = run_stream(std::vector<EdgeRecord>{{0, 1, 1.0}, {1, 2, 2.0}},
                      traced(Mode::Basic, 0.0));
  auto rep = check_push_lemma(r.trace);
  CHECK(rep.ok);
  CHECK(rep.worst_slack == 0.0);  // w(bc) = 2 = w'(ab) + w'(bc), equality
}

TEST_CASE("eviction ratio is vacuous without evictions") {
  auto r = run_stream(std::vector<EdgeRecord>{{0, 1, 1.0}},
                      traced(Mode::Capped, 0.25));
  auto rep = check_eviction_ratio(r.trace, 0.25);
  CHECK(rep.ok);
  CHECK(rep.items_checked == 0);
}

TEST_CASE("forced eviction satisfies the leftover ratio") {
  StreamSpec spec{.model = StreamModel::EvictionAdversary, .n = 2,
                  .epsilon = 0.25};
  auto edges = generate_stream(spec);
  auto r = run_stream(edges, traced(Mode::Capped, 0.25));
  REQUIRE(r.stats.edges_evicted >= 1);
  CHECK(check_eviction_ratio(r.trace, 0.25).ok);
}

TEST_CASE("discard forest structure") {
  StreamSpec spec{.model = StreamModel::EvictionAdversary, .n = 2,
                  .epsilon = 0.25};
  auto edges = generate_stream(spec);
  auto r = run_stream(edges, traced(Mode::Capped, 0.25));
  auto forest = build_discard_forest(r.trace);

  std::uint64_t victims_total = 0;
  std::set<std::uint64_t> evicted_seqs;
  for (const auto& ev : r.trace)
    if (ev.decision == Decision::Evicted) evicted_seqs.insert(ev.victim_seq);
  for (const auto& [kept, victims] : forest.discarded_by) {
    CHECK_FALSE(evicted_seqs.contains(kept));  // terminals were never evicted
    victims_total += victims.size();
    for (auto v : victims) CHECK(v < kept);  // victims pushed before keeper
  }
  CHECK(victims_total == r.stats.edges_evicted);

  auto rep = check_discard_sums(forest, r.trace, 0.25);
  CHECK(rep.ok);
}

TEST_CASE("empty discard forest is vacuously fine") {
  std::vector<TraceEvent> empty;
  auto forest = build_discard_forest(empty);
  CHECK(forest.discarded_by.empty());
  CHECK(check_discard_sums(forest, empty, 0.25).ok);
}

TEST_CASE("all certificate checks pass on random streams in all modes") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    StreamSpec spec{.model = StreamModel::GnmRandom, .n = 12, .m = 40,
                    .seed = 500 + seed};
    auto edges = generate_stream(spec);
    struct Cell { Mode mode; double eps; };
    for (auto [mode, eps] : {Cell{Mode::Basic, 0.0}, Cell{Mode::Exp, 0.25},
                             Cell{Mode::Capped, 0.25},
                             Cell{Mode::Capped, 0.125}}) {
      auto r = run_stream(edges, traced(mode, eps));
      CHECK(check_dual_feasible(r.certificate, edges).ok);
      CHECK(check_push_lemma(r.trace).ok);
      CHECK(check_phi_identity(r.trace, r.certificate).ok);
      if (mode == Mode::Capped) {
        CHECK(check_eviction_ratio(r.trace, eps).ok);
        auto forest = build_discard_forest(r.trace);
        CHECK(check_discard_sums(forest, r.trace, eps).ok);
      }
      // upper bound dominates both the engine and the oracle
      auto opt = exact_mwm(testing::to_graph(edges));
      CHECK(upper_bound(r.certificate) >= r.matching.total_weight - kTol);
      CHECK(upper_bound(r.certificate) >= opt.total_weight - kTol);
      // composition: 2(1+4eps) w(M) >= sum phi
      if (mode == Mode::Capped)
        CHECK(2.0 * (1.0 + 4.0 * eps) * r.matching.total_weight >=
              r.certificate.phi_sum * (1.0 - kTol));
    }
  }
}

TEST_CASE("tampered trace is caught") {
  StreamSpec spec{.model = StreamModel::GnmRandom, .n = 10, .m = 30,
                  .seed = 99};
  auto edges = generate_stream(spec);
  auto r = run_stream(edges, traced(Mode::Exp, 0.25));
  REQUIRE(r.stats.edges_pushed >= 2);

  auto tampered = r.trace;
  for (auto& ev : tampered)
    if (ev.decision == Decision::Pushed) {
      ev.leftover += 1.0;
      break;
    }
  bool caught = !check_push_lemma(tampered).ok ||
                !check_phi_identity(tampered, r.certificate).ok;
  CHECK(caught);
}
