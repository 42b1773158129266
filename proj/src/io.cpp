#include "mwm/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace mwm {

StreamParseError::StreamParseError(std::uint64_t line, const std::string& msg)
    : std::runtime_error("line " + std::to_string(line) + ": " + msg),
      line_number(line) {}

ParsedStream parse_stream(std::istream& in) {
  ParsedStream out;
  VertexRemap remap;
  std::string line;
  std::uint64_t lineno = 0;
  bool first_content = true;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;  // blank or comment-only

    if (first_content && first == "n") {
      first_content = false;
      std::uint64_t n;
      if (!(ls >> n)) throw StreamParseError(lineno, "bad header: n <count>");
      out.declared_n = n;
      continue;
    }
    first_content = false;

    std::uint64_t u, v;
    double w;
    std::istringstream es(line);
    if (!(es >> u >> v >> w))
      throw StreamParseError(lineno, "expected `u v w`");
    std::string extra;
    if (es >> extra)
      throw StreamParseError(lineno, "trailing tokens after `u v w`");
    if (!(w > 0.0)) throw StreamParseError(lineno, "weight must be positive");
    if (u == v) {
      ++out.self_loops_rejected;
      continue;
    }
    out.edges.push_back({remap.map(u), remap.map(v), w});
  }
  out.vertex_count = remap.size();
  out.raw_ids.reserve(out.vertex_count);
  for (VertexId i = 0; i < out.vertex_count; ++i)
    out.raw_ids.push_back(remap.raw_of(i));
  return out;
}

ParsedStream parse_stream_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open stream file: " + path);
  return parse_stream(in);
}

void write_stream(std::ostream& out, const std::vector<EdgeRecord>& edges,
                  std::optional<std::uint64_t> n) {
  if (n) out << "n " << *n << "\n";
  std::ostringstream buf;
  buf.precision(17);
  for (const auto& e : edges) {
    buf.str("");
    buf << e.u << ' ' << e.v << ' ' << e.w << '\n';
    out << buf.str();
  }
}

namespace {
const char* decision_name(Decision d) {
  switch (d) {
    case Decision::Skipped: return "skipped";
    case Decision::Pushed: return "pushed";
    case Decision::Evicted: return "evicted";
  }
  return "?";
}

Decision decision_from(const std::string& s) {
  if (s == "skipped") return Decision::Skipped;
  if (s == "pushed") return Decision::Pushed;
  if (s == "evicted") return Decision::Evicted;
  throw std::runtime_error("unknown trace decision: " + s);
}
}  // namespace

nlohmann::json trace_event_to_json(const TraceEvent& ev) {
  nlohmann::json j{{"seq", ev.seq},
                   {"kind", decision_name(ev.decision)},
                   {"u", ev.edge.u},
                   {"v", ev.edge.v},
                   {"w", ev.edge.w}};
  if (ev.decision == Decision::Pushed) {
    j["leftover"] = ev.leftover;
    j["phi_u"] = ev.phi_u_before;
    j["phi_v"] = ev.phi_v_before;
  } else if (ev.decision == Decision::Evicted) {
    j["victim_seq"] = ev.victim_seq;
    j["victim_leftover"] = ev.victim_leftover;
    j["evictor_seq"] = ev.evictor_seq;
    j["evictor_leftover"] = ev.evictor_leftover;
    j["ev_u"] = ev.evictor.u;
    j["ev_v"] = ev.evictor.v;
    j["ev_w"] = ev.evictor.w;
  }
  return j;
}

TraceEvent trace_event_from_json(const nlohmann::json& j) {
  TraceEvent ev;
  ev.seq = j.at("seq").get<std::uint64_t>();
  ev.decision = decision_from(j.at("kind").get<std::string>());
  ev.edge = {j.at("u").get<VertexId>(), j.at("v").get<VertexId>(),
             j.at("w").get<double>()};
  if (ev.decision == Decision::Pushed) {
    ev.leftover = j.at("leftover").get<double>();
    ev.phi_u_before = j.at("phi_u").get<double>();
    ev.phi_v_before = j.at("phi_v").get<double>();
  } else if (ev.decision == Decision::Evicted) {
    ev.victim_seq = j.at("victim_seq").get<std::uint64_t>();
    ev.victim_leftover = j.at("victim_leftover").get<double>();
    ev.evictor_seq = j.at("evictor_seq").get<std::uint64_t>();
    ev.evictor_leftover = j.at("evictor_leftover").get<double>();
    ev.evictor = {j.at("ev_u").get<VertexId>(), j.at("ev_v").get<VertexId>(),
                  j.at("ev_w").get<double>()};
  }
  return ev;
}

void write_trace_file(std::ostream& out, const nlohmann::json& meta,
                      const std::vector<TraceEvent>& events,
                      const std::vector<double>& final_phi) {
  nlohmann::json head = meta;
  head["record"] = "meta";
  out << head.dump() << "\n";
  for (const auto& ev : events) out << trace_event_to_json(ev).dump() << "\n";
  nlohmann::json foot{{"record", "final"}, {"phi", final_phi}};
  out << foot.dump() << "\n";
}

TraceFile read_trace_file(std::istream& in) {
  TraceFile tf;
  std::string line;
  bool have_meta = false, have_final = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line);
    if (j.contains("record")) {
      const auto rec = j.at("record").get<std::string>();
      if (rec == "meta") {
        tf.meta = j;
        have_meta = true;
      } else if (rec == "final") {
        tf.final_phi = j.at("phi").get<std::vector<double>>();
        have_final = true;
      }
      continue;
    }
    tf.events.push_back(trace_event_from_json(j));
  }
  if (!have_meta || !have_final)
    throw std::runtime_error("trace file missing meta or final record");
  return tf;
}

TraceFile read_trace_file_path(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open trace file: " + path);
  return read_trace_file(in);
}

nlohmann::json stats_to_json(const StreamStats& s) {
  nlohmann::json push_counts = nlohmann::json::array();
  for (auto c : s.per_vertex_push_counts) push_counts.push_back(c);
  return {{"edges_seen", s.edges_seen},
          {"edges_pushed", s.edges_pushed},
          {"edges_skipped", s.edges_skipped},
          {"edges_evicted", s.edges_evicted},
          {"peak_stack_size", s.peak_stack_size},
          {"peak_queue_size", s.peak_queue_size},
          {"per_vertex_push_counts", push_counts},
          {"w_max_seen", s.w_max_seen},
          {"w_min_leftover", s.w_min_leftover == std::numeric_limits<double>::infinity()
                                 ? nlohmann::json()
                                 : nlohmann::json(s.w_min_leftover)}};
}

nlohmann::json matching_to_json(const Matching& m) {
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& e : m.edges)
    edges.push_back({{"u", e.u}, {"v", e.v}, {"w", e.w}});
  return {{"edges", edges}, {"total_weight", m.total_weight}};
}

}  // namespace mwm
