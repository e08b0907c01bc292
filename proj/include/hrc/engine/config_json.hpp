#pragma once

#include <nlohmann/json.hpp>
#include <string_view>

#include "hrc/engine/config.hpp"

namespace hrc::engine {

/// Fully materialized document: every field, defaults included.
nlohmann::json to_json(const EpisodeConfig& cfg);

/// Strict reader. Absent keys keep their defaults; unknown keys and wrongly typed values
/// throw ConfigError naming the dotted key. The result is validated.
EpisodeConfig episode_config_from_json(const nlohmann::json& doc);

/// Sets `dotted.path` in `doc` to `value`, parsed as JSON when possible and as a string
/// otherwise. Intermediate objects are created as needed.
void apply_override(nlohmann::json& doc, std::string_view dotted_path, std::string_view value);

}  // namespace hrc::engine
