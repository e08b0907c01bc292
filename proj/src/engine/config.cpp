#include "hrc/engine/config.hpp"

#include <string>

#include "hrc/core/errors.hpp"

namespace hrc::engine {
namespace {

void require(bool ok, const std::string& key, const std::string& what) {
  if (!ok) {
    throw ConfigError(key, what);
  }
}

template <typename F>
void with_prefix(const std::string& prefix, F&& f) {
  try {
    f();
  } catch (const ConfigError&) {
    throw;
  } catch (const ValidationError& e) {
    throw ConfigError(prefix, e.what());
  }
}

}  // namespace

percept::ClassVector RecognizerConfig::effective_recall() const {
  percept::ClassVector recall = per_class_recall;
  if (handover_grasp_recall) {
    recall[index_of(AtomicAction::HumanGrasp)] = *handover_grasp_recall;
  }
  return percept::degrade_for_frame_rate(recall, frame_rate, trained_frame_rate,
                                         rate_mismatch_slope);
}

percept::RecognizerModel RecognizerConfig::build_model() const {
  percept::RecognizerModel model;
  model.confusion = confusion ? *confusion
                              : percept::build_confusion_matrix(
                                    effective_recall(), {no_assembly_fraction}, priors);
  model.window_len = window_len;
  model.frame_rate = frame_rate;
  model.no_assembly_scale = no_assembly_scale;
  model.confidence_spread = confidence_spread;
  return model;
}

void RecognizerConfig::validate() const {
  if (handover_grasp_recall) {
    require(*handover_grasp_recall >= 0.0 && *handover_grasp_recall <= 1.0,
            "recognizer.handover_grasp_recall", "must be in [0, 1]");
  }
  require(trained_frame_rate > 0.0, "recognizer.trained_frame_rate", "must be > 0");
  with_prefix("recognizer", [&] { build_model().validate(); });
}

void EpisodeConfig::validate() const {
  require(legs >= 1 && legs <= 4, "legs", "must be in 1..4");
  require(episode_timeout > 0.0, "episode_timeout_s", "must be > 0");

  require((scene.workspace_max.array() > scene.workspace_min.array()).all(), "scene.workspace_max",
          "must exceed workspace_min on every axis");
  require(scene.part_radius > 0.0, "scene.part_radius", "must be > 0");
  require(scene.part_z >= scene.workspace_min.z() && scene.part_z <= scene.workspace_max.z(),
          "scene.part_z", "must lie inside the workspace height");
  require(scene.min_part_separation >= 0.0, "scene.min_part_separation", "must be >= 0");

  require(robot.transit_speed > 0.0, "robot.transit_speed", "must be > 0");
  require(robot.grasp_duration >= 0.0, "robot.grasp_duration_s", "must be >= 0");

  with_prefix("servo", [&] { servo.validate(); });
  recognizer.validate();
  with_prefix("human", [&] { human.validate(); });

  require(fsm.required_consecutive >= 1, "fsm.required_consecutive", "must be >= 1");
  require(fsm.max_grasp_attempts >= 1, "fsm.max_grasp_attempts", "must be >= 1");
  require(latency.recognition_link >= 0.0, "latency.recognition_link_s", "must be >= 0");
  require(latency.command_link >= 0.0, "latency.command_link_s", "must be >= 0");
}

EpisodeConfig oracle_config(std::uint64_t seed) {
  EpisodeConfig cfg;
  cfg.seed = seed;
  cfg.recognizer.per_class_recall.fill(1.0);
  cfg.recognizer.handover_grasp_recall = 1.0;
  cfg.servo.noise = {0.0, 0.0};
  cfg.servo.grasp_success_probability = 1.0;
  return cfg;
}

}  // namespace hrc::engine
