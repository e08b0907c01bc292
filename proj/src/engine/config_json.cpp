#include "hrc/engine/config_json.hpp"

#include <set>
#include <string>

#include "hrc/core/errors.hpp"
#include "hrc/core/events.hpp"

namespace hrc::engine {
namespace {

using nlohmann::json;

json class_vector_json(const percept::ClassVector& v) {
  json out = json::object();
  for (AtomicAction a : kAllActions) {
    out[std::string(to_string(a))] = v[index_of(a)];
  }
  return out;
}

json lognormal_json(const human::LogNormal& d) {
  return {{"median", d.median}, {"dispersion", d.dispersion}};
}

/// Tracks which keys of an object were consumed so leftovers can be reported.
class Reader {
public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) {
      throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
    }
  }

  std::string key_path(std::string_view key) const {
    return path_.empty() ? std::string(key) : path_ + "." + std::string(key);
  }

  const json* find(std::string_view key) {
    const auto it = j_.find(std::string(key));
    if (it == j_.end()) {
      return nullptr;
    }
    used_.insert(std::string(key));
    return &*it;
  }

  template <typename T>
  void get(std::string_view key, T& out) {
    if (const json* v = find(key)) {
      out = convert<T>(*v, key_path(key));
    }
  }

  void vec3(std::string_view key, Vec3& out) {
    if (const json* v = find(key)) {
      try {
        out = vec3_from_json(*v);
      } catch (const std::exception&) {
        throw ConfigError(key_path(key), "expected [x, y, z] numbers");
      }
    }
  }

  template <typename F>
  void object(std::string_view key, F&& f) {
    if (const json* v = find(key)) {
      Reader sub(*v, key_path(key));
      f(sub);
      sub.finish();
    }
  }

  void class_vector(std::string_view key, percept::ClassVector& out) {
    object(key, [&](Reader& r) {
      for (AtomicAction a : kAllActions) {
        r.get(to_string(a), out[index_of(a)]);
      }
    });
  }

  void lognormal(std::string_view key, human::LogNormal& out) {
    object(key, [&](Reader& r) {
      r.get("median", out.median);
      r.get("dispersion", out.dispersion);
    });
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!used_.contains(it.key())) {
        throw ConfigError(key_path(it.key()), "unknown key");
      }
    }
  }

  template <typename T>
  static T convert(const json& v, const std::string& path) {
    if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) throw ConfigError(path, "expected a boolean");
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) throw ConfigError(path, "expected an integer");
      if constexpr (std::is_unsigned_v<T>) {
        if (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0) {
          throw ConfigError(path, "expected a non-negative integer");
        }
      }
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) throw ConfigError(path, "expected a number");
    }
    return v.get<T>();
  }

private:
  const json& j_;
  std::string path_;
  std::set<std::string> used_;
};

template <typename Enum, typename Parser>
Enum parse_enum(const json& v, const std::string& path, Parser parse) {
  if (!v.is_string()) {
    throw ConfigError(path, "expected a string");
  }
  const auto parsed = parse(v.get<std::string>());
  if (!parsed) {
    throw ConfigError(path, "unknown value '" + v.get<std::string>() + "'");
  }
  return *parsed;
}

}  // namespace

json to_json(const EpisodeConfig& c) {
  json durations = json::object();
  for (const auto& [action, dist] : c.human.durations) {
    durations[std::string(to_string(action))] = lognormal_json(dist);
  }
  json script = json::array();
  for (const auto& step : c.human.script) {
    script.push_back({{"action", to_string(step.action)}, {"duration", step.duration}});
  }
  json confusion = nullptr;
  if (c.recognizer.confusion) {
    confusion = json::array();
    for (const auto& row : *c.recognizer.confusion) {
      confusion.push_back(row);
    }
  }

  return {
      {"seed", c.seed},
      {"legs", c.legs},
      {"episode_timeout_s", c.episode_timeout},
      {"scene",
       {{"workspace_min", vec3_to_json(c.scene.workspace_min)},
        {"workspace_max", vec3_to_json(c.scene.workspace_max)},
        {"part_radius", c.scene.part_radius},
        {"part_z", c.scene.part_z},
        {"min_part_separation", c.scene.min_part_separation}}},
      {"robot",
       {{"home_pose", vec3_to_json(c.robot.home_pose)},
        {"delivery_point", vec3_to_json(c.robot.delivery_point)},
        {"transit_speed", c.robot.transit_speed},
        {"grasp_duration_s", c.robot.grasp_duration},
        {"homing", c.robot.homing}}},
      {"servo",
       {{"grid_rows", c.servo.grid_rows},
        {"grid_cols", c.servo.grid_cols},
        {"gain", c.servo.gain},
        {"max_speed", c.servo.max_speed},
        {"terminate_threshold", c.servo.terminate_threshold},
        {"descend_depth", c.servo.descend_depth},
        {"hover_height", c.servo.hover_height},
        {"noise", {{"value_sd", c.servo.noise.value_sd}, {"control_sd", c.servo.noise.control_sd}}},
        {"align_tolerance", c.servo.align_tolerance},
        {"grasp_success_probability", c.servo.grasp_success_probability},
        {"knock_sd", c.servo.knock_sd},
        {"tick_rate", c.servo.tick_rate}}},
      {"recognizer",
       {{"per_class_recall", class_vector_json(c.recognizer.per_class_recall)},
        {"handover_grasp_recall", c.recognizer.handover_grasp_recall
                                      ? json(*c.recognizer.handover_grasp_recall)
                                      : json(nullptr)},
        {"priors", class_vector_json(c.recognizer.priors)},
        {"no_assembly_fraction", c.recognizer.no_assembly_fraction},
        {"no_assembly_scale", c.recognizer.no_assembly_scale},
        {"confidence_spread", c.recognizer.confidence_spread},
        {"window_len", c.recognizer.window_len},
        {"frame_rate", c.recognizer.frame_rate},
        {"trained_frame_rate", c.recognizer.trained_frame_rate},
        {"rate_mismatch_slope", c.recognizer.rate_mismatch_slope},
        {"confusion", confusion}}},
      {"human",
       {{"mode", to_string(c.human.mode)},
        {"durations", durations},
        {"retry_probability", c.human.retry_probability},
        {"retry_timeout_s", c.human.retry_timeout},
        {"max_handover_attempts", c.human.max_handover_attempts},
        {"rotate_probability", c.human.rotate_probability},
        {"voice_delay", lognormal_json(c.human.voice_delay)},
        {"deterministic", c.human.deterministic},
        {"initial_flip", c.human.initial_flip},
        {"script", script}}},
      {"fsm",
       {{"required_consecutive", c.fsm.required_consecutive},
        {"max_grasp_attempts", c.fsm.max_grasp_attempts}}},
      {"latency",
       {{"recognition_link_s", c.latency.recognition_link},
        {"command_link_s", c.latency.command_link}}},
  };
}

EpisodeConfig episode_config_from_json(const json& doc) {
  EpisodeConfig c;
  Reader root(doc, "");
  root.get("seed", c.seed);
  root.get("legs", c.legs);
  root.get("episode_timeout_s", c.episode_timeout);

  root.object("scene", [&](Reader& r) {
    r.vec3("workspace_min", c.scene.workspace_min);
    r.vec3("workspace_max", c.scene.workspace_max);
    r.get("part_radius", c.scene.part_radius);
    r.get("part_z", c.scene.part_z);
    r.get("min_part_separation", c.scene.min_part_separation);
  });

  root.object("robot", [&](Reader& r) {
    r.vec3("home_pose", c.robot.home_pose);
    r.vec3("delivery_point", c.robot.delivery_point);
    r.get("transit_speed", c.robot.transit_speed);
    r.get("grasp_duration_s", c.robot.grasp_duration);
    r.get("homing", c.robot.homing);
  });

  root.object("servo", [&](Reader& r) {
    r.get("grid_rows", c.servo.grid_rows);
    r.get("grid_cols", c.servo.grid_cols);
    r.get("gain", c.servo.gain);
    r.get("max_speed", c.servo.max_speed);
    r.get("terminate_threshold", c.servo.terminate_threshold);
    r.get("descend_depth", c.servo.descend_depth);
    r.get("hover_height", c.servo.hover_height);
    r.object("noise", [&](Reader& n) {
      n.get("value_sd", c.servo.noise.value_sd);
      n.get("control_sd", c.servo.noise.control_sd);
    });
    r.get("align_tolerance", c.servo.align_tolerance);
    r.get("grasp_success_probability", c.servo.grasp_success_probability);
    r.get("knock_sd", c.servo.knock_sd);
    r.get("tick_rate", c.servo.tick_rate);
  });

  root.object("recognizer", [&](Reader& r) {
    auto& rc = c.recognizer;
    r.class_vector("per_class_recall", rc.per_class_recall);
    if (const json* v = r.find("handover_grasp_recall")) {
      rc.handover_grasp_recall =
          v->is_null() ? std::nullopt
                       : std::optional<double>(
                             Reader::convert<double>(*v, "recognizer.handover_grasp_recall"));
    }
    r.class_vector("priors", rc.priors);
    r.get("no_assembly_fraction", rc.no_assembly_fraction);
    r.get("no_assembly_scale", rc.no_assembly_scale);
    r.get("confidence_spread", rc.confidence_spread);
    r.get("window_len", rc.window_len);
    r.get("frame_rate", rc.frame_rate);
    r.get("trained_frame_rate", rc.trained_frame_rate);
    r.get("rate_mismatch_slope", rc.rate_mismatch_slope);
    if (const json* v = r.find("confusion")) {
      if (v->is_null()) {
        rc.confusion.reset();
      } else {
        if (!v->is_array() || v->size() != kActionCount) {
          throw ConfigError("recognizer.confusion", "expected an 8x8 array or null");
        }
        percept::ConfusionMatrix m{};
        for (std::size_t i = 0; i < kActionCount; ++i) {
          const auto& row = (*v)[i];
          if (!row.is_array() || row.size() != kActionCount) {
            throw ConfigError("recognizer.confusion", "expected an 8x8 array or null");
          }
          for (std::size_t j = 0; j < kActionCount; ++j) {
            m[i][j] = Reader::convert<double>(row[j], "recognizer.confusion");
          }
        }
        rc.confusion = m;
      }
    }
  });

  root.object("human", [&](Reader& r) {
    auto& h = c.human;
    if (const json* v = r.find("mode")) {
      h.mode = parse_enum<HandoverMode>(*v, "human.mode", parse_mode);
    }
    r.object("durations", [&](Reader& d) {
      for (AtomicAction a : kAllActions) {
        if (d.find(to_string(a)) != nullptr) {
          human::LogNormal dist = h.durations.contains(a) ? h.durations.at(a) : human::LogNormal{};
          d.lognormal(to_string(a), dist);
          h.durations[a] = dist;
        }
      }
    });
    r.get("retry_probability", h.retry_probability);
    r.get("retry_timeout_s", h.retry_timeout);
    r.get("max_handover_attempts", h.max_handover_attempts);
    r.get("rotate_probability", h.rotate_probability);
    r.lognormal("voice_delay", h.voice_delay);
    r.get("deterministic", h.deterministic);
    r.get("initial_flip", h.initial_flip);
    if (const json* v = r.find("script")) {
      if (!v->is_array()) {
        throw ConfigError("human.script", "expected an array of {action, duration}");
      }
      h.script.clear();
      for (std::size_t i = 0; i < v->size(); ++i) {
        const std::string path = "human.script[" + std::to_string(i) + "]";
        Reader step(v->at(i), path);
        human::ScriptStep s;
        const json* action = step.find("action");
        if (action == nullptr || step.find("duration") == nullptr) {
          throw ConfigError(path, "needs 'action' and 'duration'");
        }
        s.action = parse_enum<AtomicAction>(*action, path + ".action", parse_action);
        step.get("duration", s.duration);
        step.finish();
        h.script.push_back(s);
      }
    }
  });

  root.object("fsm", [&](Reader& r) {
    r.get("required_consecutive", c.fsm.required_consecutive);
    r.get("max_grasp_attempts", c.fsm.max_grasp_attempts);
  });

  root.object("latency", [&](Reader& r) {
    r.get("recognition_link_s", c.latency.recognition_link);
    r.get("command_link_s", c.latency.command_link);
  });

  root.finish();
  c.validate();
  return c;
}

void apply_override(json& doc, std::string_view dotted_path, std::string_view value) {
  if (dotted_path.empty()) {
    throw ConfigError("<override>", "empty key");
  }
  json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const auto dot = dotted_path.find('.', start);
    const std::string part(dotted_path.substr(start, dot == std::string_view::npos
                                                         ? std::string_view::npos
                                                         : dot - start));
    if (part.empty()) {
      throw ConfigError(std::string(dotted_path), "malformed dotted key");
    }
    if (!node->is_object()) {
      if (!node->is_null()) {
        throw ConfigError(std::string(dotted_path), "path crosses a non-object value");
      }
      *node = json::object();
    }
    node = &(*node)[part];
    if (dot == std::string_view::npos) {
      break;
    }
    start = dot + 1;
  }
  json parsed = json::parse(value, nullptr, false);
  *node = parsed.is_discarded() ? json(std::string(value)) : parsed;
}

}  // namespace hrc::engine
