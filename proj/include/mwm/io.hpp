#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mwm/core.hpp"

namespace mwm {

// Edge-stream text format: one `u v w` triple per line, `#` comments,
// optional `n <count>` header line. External vertex ids are remapped to
// dense indices in order of first appearance.
struct ParsedStream {
  std::vector<EdgeRecord> edges;       // dense ids
  std::optional<std::uint64_t> declared_n;
  std::uint64_t self_loops_rejected = 0;
  VertexId vertex_count = 0;
  std::vector<std::uint64_t> raw_ids;  // dense index -> external id
};

struct StreamParseError : std::runtime_error {
  StreamParseError(std::uint64_t line, const std::string& msg);
  std::uint64_t line_number;
};

ParsedStream parse_stream(std::istream& in);
ParsedStream parse_stream_file(const std::string& path);

void write_stream(std::ostream& out, const std::vector<EdgeRecord>& edges,
                  std::optional<std::uint64_t> n = std::nullopt);

// Trace file: JSON lines. First line is a meta object (mode, epsilon,
// beta, edges_seen), then one event per line, then a footer with the
// final phi vector.
struct TraceFile {
  nlohmann::json meta;
  std::vector<TraceEvent> events;
  std::vector<double> final_phi;
};

nlohmann::json trace_event_to_json(const TraceEvent& ev);
TraceEvent trace_event_from_json(const nlohmann::json& j);

void write_trace_file(std::ostream& out, const nlohmann::json& meta,
                      const std::vector<TraceEvent>& events,
                      const std::vector<double>& final_phi);
TraceFile read_trace_file(std::istream& in);
TraceFile read_trace_file_path(const std::string& path);

nlohmann::json stats_to_json(const StreamStats& s);
nlohmann::json matching_to_json(const Matching& m);

}  // namespace mwm
