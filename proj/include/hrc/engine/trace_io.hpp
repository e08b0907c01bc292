#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "hrc/engine/engine.hpp"

namespace hrc::engine {

/// JSON Lines: a header record {schema_version, config, episode}, then one event per line.
void write_trace(std::ostream& out, const EpisodeTrace& trace);

/// Re-validates the embedded config and the event order. Throws ValidationError.
EpisodeTrace read_trace(std::istream& in);

/// "episode_<participant>_<mode>_<repetition>.jsonl", zero-padded so names sort.
std::string trace_file_name(const EpisodeTrace& trace);

void write_trace_file(const std::filesystem::path& path, const EpisodeTrace& trace);
EpisodeTrace read_trace_file(const std::filesystem::path& path);

}  // namespace hrc::engine
