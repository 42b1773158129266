#include <doctest.h>

#include <cmath>
#include <map>

#include "helpers.hpp"
#include "mwm/engine.hpp"
#include "mwm/oracle.hpp"

using namespace mwm;

TEST_CASE("default_beta") {
  // ceil(3*ln(1/eps)/eps) + 1
  CHECK(default_beta(0.25) == 18);
  CHECK(default_beta(0.1) == 71);
  CHECK(default_beta(1.0) == 1);
  CHECK(default_beta(0.125) == 51);
  CHECK_THROWS_AS(default_beta(0.0), std::invalid_argument);
  CHECK_THROWS_AS(default_beta(-0.5), std::invalid_argument);
}

TEST_CASE("config validation") {
  EngineConfig cfg;
  cfg.mode = Mode::Basic;
  cfg.epsilon = 0.1;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.epsilon = 0.0;
  CHECK_NOTHROW(cfg.validate());

  cfg.mode = Mode::Exp;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.epsilon = 0.5;
  CHECK_NOTHROW(cfg.validate());

  cfg.mode = Mode::Capped;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);  // eps > 1/4
  cfg.epsilon = 0.25;
  CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("first edge at zero potentials is pushed with full leftover") {
  EngineConfig cfg{.mode = Mode::Exp, .epsilon = 0.5};
  StreamEngine engine(cfg);
  CHECK(engine.process_edge({0, 1, 5.0}) == Decision::Pushed);
  CHECK(engine.phi(0) == 5.0);
  CHECK(engine.phi(1) == 5.0);
}

TEST_CASE("covered edge is skipped") {
  EngineConfig cfg{.mode = Mode::Exp, .epsilon = 0.5};
  StreamEngine engine(cfg);
  engine.process_edge({0, 1, 5.0});
  // 5 < 1.5 * (5 + 0)
  CHECK(engine.process_edge({0, 2, 5.0}) == Decision::Skipped);
  CHECK(engine.phi(0) == 5.0);
  CHECK(engine.phi(2) == 0.0);
  CHECK(engine.stats().edges_skipped == 1);
}

TEST_CASE("path a-b-c with eps=0: both edges pushed, bc wins the unwind") {
  EngineConfig cfg{.mode = Mode::Basic, .epsilon = 0.0};
  StreamEngine engine(cfg);
  CHECK(engine.process_edge({0, 1, 1.0}) == Decision::Pushed);
  CHECK(engine.phi(0) == 1.0);
  CHECK(engine.phi(1) == 1.0);
  CHECK(engine.process_edge({1, 2, 2.0}) == Decision::Pushed);  // 2 >= 1
  CHECK(engine.phi(1) == 2.0);
  CHECK(engine.phi(2) == 1.0);

  Matching m = engine.finalize();
  REQUIRE(m.edges.size() == 1);
  CHECK(m.edges[0] == EdgeRecord{1, 2, 2.0});
  CHECK(m.total_weight == 2.0);
  // brute force over all matchings of the path gives 2
  CHECK(testing::brute_force_mwm({3, {{0, 1, 1.0}, {1, 2, 2.0}}}) == 2.0);
}

TEST_CASE("equality with the threshold pushes (strict < skips)") {
  EngineConfig cfg{.mode = Mode::Exp, .epsilon = 0.5};
  StreamEngine engine(cfg);
  engine.process_edge({0, 1, 2.0});
  // w = 1.5 * (2 + 0) exactly
  CHECK(engine.process_edge({0, 2, 3.0}) == Decision::Pushed);
}

TEST_CASE("finalize: empty stack, star unwind, double-finalize error") {
  SUBCASE("empty stream") {
    StreamEngine engine({.mode = Mode::Basic, .epsilon = 0.0});
    Matching m = engine.finalize();
    CHECK(m.edges.empty());
    CHECK(m.total_weight == 0.0);
  }
  SUBCASE("star keeps only the last pushed edge") {
    StreamEngine engine({.mode = Mode::Basic, .epsilon = 0.0});
    engine.process_edge({0, 1, 1.0});
    engine.process_edge({0, 2, 2.0});
    engine.process_edge({0, 3, 4.0});
    Matching m = engine.finalize();
    REQUIRE(m.edges.size() == 1);
    CHECK(m.edges[0].v == 3);
  }
  SUBCASE("finalize is terminal") {
    StreamEngine engine({.mode = Mode::Basic, .epsilon = 0.0});
    engine.finalize();
    CHECK_THROWS_AS(engine.finalize(), std::logic_error);
    StreamEngine e2({.mode = Mode::Basic, .epsilon = 0.0});
    e2.finalize();
    CHECK_THROWS_AS(e2.process_edge({0, 1, 1.0}), std::logic_error);
  }
}

TEST_CASE("run_stream: triangle with eps=0.01 matches the one-edge OPT") {
  std::vector<EdgeRecord> tri{{0, 1, 1.0}, {1, 2, 2.0}, {0, 2, 3.0}};
  auto r = run_stream(tri, {.mode = Mode::Exp, .epsilon = 0.01});
  CHECK(r.matching.total_weight == 3.0);
  Matching opt = exact_mwm({3, tri});
  CHECK(opt.total_weight == 3.0);
  CHECK(r.matching.total_weight >= opt.total_weight / (2.0 * 1.01));
}

TEST_CASE("run_stream: empty stream gives empty matching and certificate") {
  auto r = run_stream({}, {.mode = Mode::Exp, .epsilon = 0.5});
  CHECK(r.matching.edges.empty());
  CHECK(r.certificate.phi_sum == 0.0);
  CHECK(r.stats.edges_seen == 0);
}

TEST_CASE("malformed edges are rejected") {
  StreamEngine engine({.mode = Mode::Exp, .epsilon = 0.5});
  CHECK_THROWS_AS(engine.process_edge({3, 3, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(engine.process_edge({0, 1, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(engine.process_edge({0, 1, -2.0}), std::invalid_argument);
}

namespace {

EngineConfig traced(Mode mode, double eps) {
  return {.mode = mode, .epsilon = eps, .trace_enabled = true};
}

std::vector<StreamSpec> property_specs() {
  std::vector<StreamSpec> specs;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    StreamSpec s;
    s.model = seed % 3 == 0 ? StreamModel::Complete : StreamModel::GnmRandom;
    s.n = 4 + seed % 11;
    s.m = std::min<std::uint64_t>(3 * s.n, std::uint64_t{s.n} * (s.n - 1) / 2);
    s.w_max = 50.0;
    s.seed = seed * 7919 + 1;
    specs.push_back(s);
  }
  return specs;
}

}  // namespace

TEST_CASE("pushed edges grow potentials by a (1+eps) factor") {
  for (double eps : {0.1, 0.25}) {
    for (const auto& spec : property_specs()) {
      auto edges = generate_stream(spec);
      auto r = run_stream(edges, traced(Mode::Exp, eps));
      for (const auto& ev : r.trace) {
        if (ev.decision != Decision::Pushed) continue;
        double after_u = ev.phi_u_before + ev.leftover;
        double after_v = ev.phi_v_before + ev.leftover;
        if (ev.phi_u_before > 0.0)
          CHECK(after_u >= (1.0 + eps) * ev.phi_u_before * (1 - kTol));
        if (ev.phi_v_before > 0.0)
          CHECK(after_v >= (1.0 + eps) * ev.phi_v_before * (1 - kTol));
        if (ev.phi_u_before == 0.0 && ev.phi_v_before == 0.0)
          CHECK(after_u == ev.edge.w);
        // leftover positivity
        CHECK(ev.leftover > 0.0);
        CHECK(ev.leftover >=
              eps * (ev.phi_u_before + ev.phi_v_before) * (1 - kTol));
      }
    }
  }
}

TEST_CASE("per-vertex push counts respect the exponential-growth bound") {
  for (const auto& spec : property_specs()) {
    auto edges = generate_stream(spec);
    for (double eps : {0.1, 0.25, 0.5}) {
      auto r = run_stream(edges, {.mode = Mode::Exp, .epsilon = eps});
      if (r.stats.edges_pushed == 0) continue;
      double W = r.stats.w_max_seen / r.stats.w_min_leftover;
      double bound = 2.0 + std::log(W) / std::log1p(eps);
      for (auto c : r.stats.per_vertex_push_counts)
        CHECK(static_cast<double>(c) <= bound + kTol);
    }
  }
}

TEST_CASE("sum of doubled leftovers equals the final potential sum") {
  for (const auto& spec : property_specs()) {
    auto edges = generate_stream(spec);
    for (auto mode : {Mode::Basic, Mode::Exp, Mode::Capped}) {
      double eps = mode == Mode::Basic ? 0.0 : 0.25;
      auto r = run_stream(edges, traced(mode, eps));
      double twice = 0.0;
      for (const auto& ev : r.trace)
        if (ev.decision == Decision::Pushed) twice += 2.0 * ev.leftover;
      double tol = kTol * static_cast<double>(r.stats.edges_pushed + 1) *
                   std::max(1.0, r.certificate.phi_sum);
      CHECK(std::abs(twice - r.certificate.phi_sum) <= tol);
    }
  }
}

TEST_CASE("capped mode: queue cap and stack space bound hold") {
  for (const auto& spec : property_specs()) {
    auto edges = generate_stream(spec);
    for (double eps : {0.125, 0.25}) {
      EngineConfig cfg = traced(Mode::Capped, eps);
      auto r = run_stream(edges, cfg);
      CHECK(r.stats.peak_queue_size <= cfg.beta());
      std::uint64_t n_seen = r.stats.per_vertex_push_counts.size();
      CHECK(r.stats.peak_stack_size <= n_seen * cfg.beta());
      CHECK(r.stats.edges_seen ==
            r.stats.edges_pushed + r.stats.edges_skipped);
      CHECK(r.stats.edges_evicted <= r.stats.edges_pushed);
    }
  }
}

TEST_CASE("capped mode with tiny beta still yields a valid matching") {
  for (const auto& spec : property_specs()) {
    auto edges = generate_stream(spec);
    EngineConfig cfg{.mode = Mode::Capped,
                     .epsilon = 0.25,
                     .beta_override = 1,
                     .trace_enabled = true};
    auto r = run_stream(edges, cfg);
    CHECK(matching_valid(r.matching));
    CHECK(r.stats.peak_queue_size <= 1);
  }
}

TEST_CASE("eviction attribution: one push may evict at both endpoints") {
  // Two hubs sharing every edge: {0,1} pushed repeatedly overflows both
  // queues at once with beta=1; each overflow names the same evictor.
  EngineConfig cfg{.mode = Mode::Capped,
                   .epsilon = 0.25,
                   .beta_override = 1,
                   .trace_enabled = true};
  StreamEngine engine(cfg);
  engine.process_edge({0, 1, 1.0});
  engine.process_edge({0, 1, 10.0});  // parallel edge evicts at u and v
  std::map<std::uint64_t, int> evictors;
  int evictions = 0;
  for (const auto& ev : engine.trace())
    if (ev.decision == Decision::Evicted) {
      ++evictions;
      evictors[ev.evictor_seq]++;
    }
  CHECK(evictions == 1);  // second dequeue sees a stale entry
  CHECK(engine.stats().edges_evicted == 1);
}

TEST_CASE("determinism: identical stream and config give identical output") {
  StreamSpec spec{.model = StreamModel::GnmRandom,
                  .n = 12,
                  .m = 40,
                  .seed = 123};
  auto edges = generate_stream(spec);
  auto a = run_stream(edges, traced(Mode::Capped, 0.25));
  auto b = run_stream(edges, traced(Mode::Capped, 0.25));
  CHECK(a.matching.edges == b.matching.edges);
  CHECK(a.certificate.phi == b.certificate.phi);
  CHECK(a.stats.edges_pushed == b.stats.edges_pushed);
  CHECK(a.trace.size() == b.trace.size());
}

TEST_CASE("basic mode matches exp mode run at eps=0") {
  for (const auto& spec : property_specs()) {
    auto edges = generate_stream(spec);
    auto basic = run_stream(edges, {.mode = Mode::Basic, .epsilon = 0.0});
    // the 2-approximation baseline
    auto opt = exact_mwm(testing::to_graph(edges));
    CHECK(basic.matching.total_weight >= opt.total_weight / 2.0 - kTol);
  }
}
