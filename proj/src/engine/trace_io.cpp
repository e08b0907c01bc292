#include "hrc/engine/trace_io.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

#include "hrc/core/errors.hpp"
#include "hrc/engine/config_json.hpp"

namespace hrc::engine {

using nlohmann::json;

void write_trace(std::ostream& out, const EpisodeTrace& trace) {
  const json header = {
      {"schema_version", kSchemaVersion},
      {"config", to_json(trace.config)},
      {"episode",
       {{"participant", trace.meta.participant},
        {"repetition", trace.meta.repetition},
        {"index", trace.meta.episode_index},
        {"mode", to_string(trace.config.human.mode)}}},
  };
  out << header.dump() << '\n';
  for (const auto& e : trace.events) {
    out << to_json(e).dump() << '\n';
  }
}

EpisodeTrace read_trace(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) {
    throw ValidationError("trace is empty");
  }
  const json header = json::parse(line, nullptr, false);
  if (header.is_discarded() || !header.is_object()) {
    throw ValidationError("trace header is not a JSON object");
  }
  if (header.value("schema_version", -1) != kSchemaVersion) {
    throw ValidationError("unsupported trace schema_version");
  }
  if (!header.contains("config") || !header.contains("episode")) {
    throw ValidationError("trace header needs 'config' and 'episode'");
  }

  EpisodeTrace trace;
  trace.config = episode_config_from_json(header.at("config"));
  try {
    const auto& ep = header.at("episode");
    trace.meta.participant = ep.at("participant").get<int>();
    trace.meta.repetition = ep.at("repetition").get<int>();
    trace.meta.episode_index = ep.at("index").get<int>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("trace episode header: ") + e.what());
  }

  std::size_t line_no = 1;
  bool ended = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) {
      continue;
    }
    if (ended) {
      throw ValidationError("event after episode_end at line " + std::to_string(line_no));
    }
    const json j = json::parse(line, nullptr, false);
    if (j.is_discarded()) {
      throw ValidationError("malformed JSON at line " + std::to_string(line_no));
    }
    SimEvent e = event_from_json(j);
    if (const auto* end = e.as<EpisodeEndEvent>()) {
      trace.outcome = end->outcome;
      trace.reason = end->reason;
      trace.at_cycle = end->at_cycle;
      ended = true;
    } else if (e.as<ReleaseEvent>() != nullptr) {
      trace.cycle_boundaries.push_back(e.time);
    }
    trace.events.push_back(std::move(e));
  }
  if (!is_totally_ordered(trace.events)) {
    throw ValidationError("trace events are not ordered by (time, seq)");
  }
  if (!ended) {
    throw ValidationError("trace has no episode_end event");
  }
  return trace;
}

std::string trace_file_name(const EpisodeTrace& trace) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "episode_p%03d_%s_r%03d.jsonl", trace.meta.participant,
                std::string(to_string(trace.config.human.mode)).c_str(), trace.meta.repetition);
  return buf;
}

void write_trace_file(const std::filesystem::path& path, const EpisodeTrace& trace) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  write_trace(out, trace);
  if (!out) {
    throw std::runtime_error("write failed for " + path.string());
  }
}

EpisodeTrace read_trace_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot read " + path.string());
  }
  return read_trace(in);
}

}  // namespace hrc::engine
