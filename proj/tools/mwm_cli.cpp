#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mwm/certificate.hpp"
#include "mwm/compaction.hpp"
#include "mwm/core.hpp"
#include "mwm/engine.hpp"
#include "mwm/io.hpp"
#include "mwm/oracle.hpp"

using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFail = 1;
constexpr int kExitUsage = 2;

mwm::Mode parse_mode(const std::string& s) {
  if (s == "basic") return mwm::Mode::Basic;
  if (s == "exp") return mwm::Mode::Exp;
  if (s == "capped") return mwm::Mode::Capped;
  throw CLI::ValidationError("--mode", "must be one of basic|exp|capped");
}

json config_to_json(const mwm::EngineConfig& cfg) {
  json j{{"mode", cfg.mode == mwm::Mode::Basic  ? "basic"
              : cfg.mode == mwm::Mode::Exp      ? "exp"
                                                : "capped"},
         {"epsilon", cfg.epsilon},
         {"quantize", cfg.quantize},
         {"phi_backend",
          cfg.phi_backend == mwm::PhiBackend::Dense ? "dense" : "compact"}};
  if (cfg.mode == mwm::Mode::Capped) j["beta"] = cfg.beta();
  if (cfg.threshold_n) j["threshold_n"] = *cfg.threshold_n;
  return j;
}

// Re-derives which stream edges survive the delta-threshold filter; the
// filter is deterministic so this reproduces the engine's decisions.
std::vector<mwm::EdgeRecord> surviving_edges(
    const std::vector<mwm::EdgeRecord>& edges, const mwm::EngineConfig& cfg) {
  if (!cfg.quantize || !cfg.threshold_n) return edges;
  mwm::ThresholdFilter filter(*cfg.threshold_n, cfg.epsilon);
  std::vector<mwm::EdgeRecord> kept;
  kept.reserve(edges.size());
  for (auto e : edges) {
    e.w = mwm::dequantize(mwm::quantize(e.w, cfg.epsilon), cfg.epsilon);
    if (filter.inspect(e) == mwm::ThresholdFilter::Verdict::Keep)
      kept.push_back(e);
  }
  return kept;
}

json run_checks(const std::vector<mwm::EdgeRecord>& edges,
                const mwm::EngineConfig& cfg,
                const mwm::DualCertificate& cert,
                const std::vector<mwm::TraceEvent>& trace, bool& all_ok) {
  double check_eps = cfg.quantize ? mwm::effective_epsilon(cfg.epsilon)
                                  : cfg.epsilon;
  mwm::DualCertificate check_cert = cert;
  check_cert.epsilon = check_eps;

  std::vector<mwm::CheckReport> reports;
  reports.push_back(
      mwm::check_dual_feasible(check_cert, surviving_edges(edges, cfg)));
  reports.push_back(mwm::check_push_lemma(trace));
  reports.push_back(mwm::check_phi_identity(trace, cert));
  if (cfg.mode == mwm::Mode::Capped) {
    reports.push_back(mwm::check_eviction_ratio(trace, check_eps));
    auto forest = mwm::build_discard_forest(trace);
    reports.push_back(mwm::check_discard_sums(forest, trace, check_eps));
  }

  json out = json::array();
  for (const auto& rep : reports) {
    all_ok = all_ok && rep.ok;
    json offenders = json::array();
    for (const auto& o : rep.offenders) offenders.push_back(o);
    out.push_back({{"check", rep.name},
                   {"pass", rep.ok},
                   {"worst_slack", rep.worst_slack},
                   {"items_checked", rep.items_checked},
                   {"offenders", offenders}});
  }
  return out;
}

struct RunFlags {
  std::string input = "-";
  std::string mode = "exp";
  double epsilon = 0.25;
  std::optional<std::uint32_t> beta;
  bool quantize = false;
  std::optional<std::uint32_t> threshold_n;
  std::string phi_backend = "dense";
  std::string trace_path;
  bool verify = false;
  bool as_json = false;
  bool timing = false;
};

mwm::EngineConfig make_config(const RunFlags& f) {
  mwm::EngineConfig cfg;
  cfg.mode = parse_mode(f.mode);
  cfg.epsilon = cfg.mode == mwm::Mode::Basic ? 0.0 : f.epsilon;
  cfg.beta_override = f.beta;
  cfg.quantize = f.quantize;
  cfg.threshold_n = f.threshold_n;
  if (f.phi_backend == "compact")
    cfg.phi_backend = mwm::PhiBackend::Compact;
  else if (f.phi_backend != "dense")
    throw CLI::ValidationError("--phi-backend", "must be dense|compact");
  cfg.trace_enabled = f.verify || !f.trace_path.empty();
  cfg.validate();
  return cfg;
}

int cmd_run(const RunFlags& flags) {
  mwm::ParsedStream parsed;
  if (flags.input == "-") {
    parsed = mwm::parse_stream(std::cin);
  } else {
    parsed = mwm::parse_stream_file(flags.input);
  }
  mwm::EngineConfig cfg = make_config(flags);

  auto t0 = std::chrono::steady_clock::now();
  mwm::RunResult result = mwm::run_stream(parsed.edges, cfg);
  auto t1 = std::chrono::steady_clock::now();

  if (!flags.trace_path.empty()) {
    std::ofstream out(flags.trace_path);
    if (!out) {
      std::cerr << "cannot write trace file: " << flags.trace_path << "\n";
      return kExitUsage;
    }
    json meta = config_to_json(cfg);
    meta["edges_seen"] = result.stats.edges_seen;
    mwm::write_trace_file(out, meta, result.trace, result.certificate.phi);
  }

  bool checks_ok = true;
  json verification;
  if (flags.verify)
    verification = run_checks(parsed.edges, cfg, result.certificate,
                              result.trace, checks_ok);

  json report{{"config", config_to_json(cfg)},
              {"matching", mwm::matching_to_json(result.matching)},
              {"certificate",
               {{"phi_sum", result.certificate.phi_sum},
                {"upper_bound", mwm::upper_bound(result.certificate)},
                {"epsilon", result.certificate.epsilon}}},
              {"stats", mwm::stats_to_json(result.stats)},
              {"self_loops_rejected", parsed.self_loops_rejected},
              {"edges_thresholded", result.edges_thresholded}};
  // External vertex ids in the reported matching.
  for (auto& e : report["matching"]["edges"]) {
    e["u"] = parsed.raw_ids.at(e["u"].get<mwm::VertexId>());
    e["v"] = parsed.raw_ids.at(e["v"].get<mwm::VertexId>());
  }
  if (flags.verify) report["verification"] = verification;
  if (flags.timing) {
    double ns = std::chrono::duration<double, std::nano>(t1 - t0).count();
    report["timing"] = {
        {"wall_ns", ns},
        {"ns_per_edge",
         result.stats.edges_seen ? ns / result.stats.edges_seen : 0.0}};
  }

  if (flags.as_json) {
    std::cout << report.dump(2) << "\n";
  } else {
    std::cout << "matching weight: " << result.matching.total_weight << " ("
              << result.matching.edges.size() << " edges)\n"
              << "dual upper bound: " << mwm::upper_bound(result.certificate)
              << "\n"
              << "edges seen/pushed/skipped/evicted: "
              << result.stats.edges_seen << "/" << result.stats.edges_pushed
              << "/" << result.stats.edges_skipped << "/"
              << result.stats.edges_evicted << "\n"
              << "peak stack: " << result.stats.peak_stack_size << "\n";
    if (flags.verify)
      std::cout << "verification: " << (checks_ok ? "all checks pass" : "FAILED")
                << "\n";
  }
  return checks_ok ? kExitOk : kExitVerifyFail;
}

struct GenFlags {
  std::string model = "gnm_random";
  std::uint32_t n = 0;
  std::uint64_t m = 0;
  std::string weights = "uniform";
  double w_max = 100.0;
  double epsilon = 0.25;
  std::string order = "arrival_random";
  std::uint64_t seed = 0;
  std::string out_path = "-";
};

int cmd_gen(const GenFlags& f) {
  mwm::StreamSpec spec;
  if (f.model == "gnm_random") spec.model = mwm::StreamModel::GnmRandom;
  else if (f.model == "complete") spec.model = mwm::StreamModel::Complete;
  else if (f.model == "bipartite") spec.model = mwm::StreamModel::Bipartite;
  else if (f.model == "path") spec.model = mwm::StreamModel::Path;
  else if (f.model == "star") spec.model = mwm::StreamModel::Star;
  else if (f.model == "eviction_adversary")
    spec.model = mwm::StreamModel::EvictionAdversary;
  else throw CLI::ValidationError("--model", "unknown model " + f.model);

  if (f.weights == "uniform") spec.weight_law = mwm::WeightLaw::Uniform;
  else if (f.weights == "powers_of") spec.weight_law = mwm::WeightLaw::PowersOf;
  else if (f.weights == "constant") spec.weight_law = mwm::WeightLaw::Constant;
  else throw CLI::ValidationError("--weights", "unknown weight law");

  if (f.order == "arrival_random") spec.order = mwm::ArrivalOrder::ArrivalRandom;
  else if (f.order == "weight_increasing")
    spec.order = mwm::ArrivalOrder::WeightIncreasing;
  else if (f.order == "weight_decreasing")
    spec.order = mwm::ArrivalOrder::WeightDecreasing;
  else throw CLI::ValidationError("--order", "unknown order");

  spec.n = f.n;
  spec.m = f.m;
  spec.w_max = f.w_max;
  spec.epsilon = f.epsilon;
  spec.seed = f.seed;

  auto edges = mwm::generate_stream(spec);
  if (f.out_path == "-") {
    mwm::write_stream(std::cout, edges, spec.n);
  } else {
    std::ofstream out(f.out_path);
    if (!out) {
      std::cerr << "cannot write: " << f.out_path << "\n";
      return kExitUsage;
    }
    mwm::write_stream(out, edges, spec.n);
  }
  return kExitOk;
}

int cmd_verify(const std::string& stream_path, const std::string& trace_path) {
  mwm::ParsedStream parsed = mwm::parse_stream_file(stream_path);
  mwm::TraceFile tf = mwm::read_trace_file_path(trace_path);

  mwm::EngineConfig cfg;
  cfg.mode = parse_mode(tf.meta.at("mode").get<std::string>());
  cfg.epsilon = tf.meta.at("epsilon").get<double>();
  cfg.quantize = tf.meta.value("quantize", false);
  if (tf.meta.contains("threshold_n"))
    cfg.threshold_n = tf.meta.at("threshold_n").get<std::uint32_t>();
  cfg.trace_enabled = true;

  auto recorded = tf.meta.at("edges_seen").get<std::uint64_t>();
  auto replayed = static_cast<std::uint64_t>(
      surviving_edges(parsed.edges, cfg).size());
  if (recorded != replayed) {
    std::cerr << "stream/trace mismatch: trace saw " << recorded
              << " edges, stream has " << replayed << "\n";
    return kExitUsage;
  }

  mwm::DualCertificate cert =
      mwm::make_certificate(tf.final_phi, cfg.epsilon);
  bool ok = true;
  json verification =
      run_checks(parsed.edges, cfg, cert, tf.events, ok);
  std::cout << json{{"verification", verification}, {"pass", ok}}.dump(2)
            << "\n";
  return ok ? kExitOk : kExitVerifyFail;
}

struct BenchFlags {
  std::string model = "gnm_random";
  std::uint32_t n = 10000;
  std::uint64_t m = 100000;
  double w_max = 100.0;
  std::uint64_t seed = 0;
  std::vector<std::string> modes{"basic", "exp", "capped"};
  std::vector<double> epsilons{0.25};
  bool as_json = false;
};

int cmd_bench(const BenchFlags& f) {
  GenFlags gf;
  gf.model = f.model;
  gf.n = f.n;
  gf.m = f.m;
  gf.w_max = f.w_max;
  gf.seed = f.seed;
  mwm::StreamSpec spec;
  spec.model = mwm::StreamModel::GnmRandom;
  if (f.model == "complete") spec.model = mwm::StreamModel::Complete;
  if (f.model == "bipartite") spec.model = mwm::StreamModel::Bipartite;
  spec.n = f.n;
  spec.m = f.m;
  spec.w_max = f.w_max;
  spec.seed = f.seed;
  auto edges = mwm::generate_stream(spec);

  json table = json::array();
  std::cout << "mode      eps      ns/edge   matching_w    peak_stack  pushes\n";
  for (const auto& mode_name : f.modes) {
    mwm::Mode mode = parse_mode(mode_name);
    for (double eps : f.epsilons) {
      mwm::EngineConfig cfg;
      cfg.mode = mode;
      cfg.epsilon = mode == mwm::Mode::Basic ? 0.0 : eps;
      cfg.validate();
      auto t0 = std::chrono::steady_clock::now();
      mwm::RunResult r = mwm::run_stream(edges, cfg);
      auto t1 = std::chrono::steady_clock::now();
      double ns = std::chrono::duration<double, std::nano>(t1 - t0).count();
      double per_edge = edges.empty() ? 0.0 : ns / edges.size();
      std::printf("%-8s  %-6.4g  %8.1f  %12.2f  %10llu  %llu\n",
                  mode_name.c_str(), cfg.epsilon, per_edge,
                  r.matching.total_weight,
                  static_cast<unsigned long long>(r.stats.peak_stack_size),
                  static_cast<unsigned long long>(r.stats.edges_pushed));
      table.push_back({{"mode", mode_name},
                       {"epsilon", cfg.epsilon},
                       {"ns_per_edge", per_edge},
                       {"matching_weight", r.matching.total_weight},
                       {"peak_stack_size", r.stats.peak_stack_size},
                       {"edges_pushed", r.stats.edges_pushed},
                       {"edges_evicted", r.stats.edges_evicted}});
      if (mode == mwm::Mode::Basic) break;  // epsilon grid is meaningless
    }
  }
  if (f.as_json) std::cout << table.dump(2) << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"one-pass maximum-weight-matching engine"};
  app.require_subcommand(1);

  RunFlags rf;
  auto* run = app.add_subcommand("run", "run the engine over an edge stream");
  run->add_option("input", rf.input, "stream file, or - for stdin");
  run->add_option("--mode", rf.mode, "basic|exp|capped");
  run->add_option("--epsilon", rf.epsilon, "approximation parameter");
  run->add_option("--beta", rf.beta, "queue capacity override (capped)");
  run->add_flag("--quantize", rf.quantize, "round weights to powers of 1+eps");
  run->add_option("--threshold-n", rf.threshold_n,
                  "vertex bound enabling the delta-threshold filter");
  run->add_option("--phi-backend", rf.phi_backend, "dense|compact");
  run->add_option("--trace", rf.trace_path, "write a JSONL trace");
  run->add_flag("--verify", rf.verify, "run certificate checks");
  run->add_flag("--json", rf.as_json, "full JSON report on stdout");
  run->add_flag("--timing", rf.timing, "include wall-clock timing in report");

  GenFlags gf;
  auto* gen = app.add_subcommand("gen", "generate a reproducible edge stream");
  gen->add_option("--model", gf.model,
                  "gnm_random|complete|bipartite|path|star|eviction_adversary");
  gen->add_option("--n", gf.n, "vertex count")->required();
  gen->add_option("--m", gf.m, "edge count (random models)");
  gen->add_option("--weights", gf.weights, "uniform|powers_of|constant");
  gen->add_option("--w-max", gf.w_max, "max weight (uniform/powers_of)");
  gen->add_option("--epsilon", gf.epsilon, "powers_of base / adversary eps");
  gen->add_option("--order", gf.order,
                  "arrival_random|weight_increasing|weight_decreasing");
  gen->add_option("--seed", gf.seed, "PRNG seed");
  gen->add_option("--out", gf.out_path, "output file, or - for stdout");

  std::string vstream, vtrace;
  auto* verify = app.add_subcommand("verify",
                                    "check a stream/trace pair");
  verify->add_option("stream", vstream, "edge stream file")->required();
  verify->add_option("trace", vtrace, "trace file from run --trace")->required();

  BenchFlags bf;
  auto* bench = app.add_subcommand("bench", "throughput/space benchmark grid");
  bench->add_option("--model", bf.model, "gnm_random|complete|bipartite");
  bench->add_option("--n", bf.n, "vertex count");
  bench->add_option("--m", bf.m, "edge count");
  bench->add_option("--w-max", bf.w_max, "max weight");
  bench->add_option("--seed", bf.seed, "PRNG seed");
  bench->add_option("--modes", bf.modes, "modes to benchmark");
  bench->add_option("--epsilons", bf.epsilons, "epsilon grid");
  bench->add_flag("--json", bf.as_json, "also print a JSON table");

  try {
    app.parse(argc, argv);
    if (run->parsed()) return cmd_run(rf);
    if (gen->parsed()) return cmd_gen(gf);
    if (verify->parsed()) return cmd_verify(vstream, vtrace);
    if (bench->parsed()) return cmd_bench(bf);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
