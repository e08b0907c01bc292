#include <gtest/gtest.h>

#include "hrc/core/errors.hpp"
#include "hrc/engine/config.hpp"
#include "hrc/engine/config_json.hpp"

using namespace hrc;
using namespace hrc::engine;
using nlohmann::json;

namespace {

std::string error_key(const json& doc) {
  try {
    episode_config_from_json(doc);
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "<no error>";
}

json with(std::string_view path, std::string_view value) {
  json doc = json::object();
  apply_override(doc, path, value);
  return doc;
}

}  // namespace

TEST(ConfigJson, DefaultsRoundTrip) {
  const EpisodeConfig cfg;
  const json doc = to_json(cfg);
  EXPECT_EQ(to_json(episode_config_from_json(doc)), doc);
  EXPECT_EQ(to_json(episode_config_from_json(json::object())), doc);
}

TEST(ConfigJson, NonDefaultRoundTrip) {
  EpisodeConfig cfg = oracle_config(77);
  cfg.human.mode = HandoverMode::VoiceCommand;
  cfg.human.script = {{AtomicAction::Reach, 1.25}, {AtomicAction::SpinLeg, 2.5}};
  cfg.recognizer.handover_grasp_recall.reset();
  cfg.recognizer.confusion = cfg.recognizer.build_model().confusion;
  cfg.latency.command_link = 0.05;
  cfg.seed = 18446744073709551615ull;
  const json doc = to_json(cfg);
  const EpisodeConfig back = episode_config_from_json(doc);
  EXPECT_EQ(to_json(back), doc);
  EXPECT_EQ(back.seed, cfg.seed);
  EXPECT_EQ(back.human.script.size(), 2u);
  EXPECT_FALSE(back.recognizer.handover_grasp_recall.has_value());
  EXPECT_TRUE(back.recognizer.confusion.has_value());
}

TEST(ConfigJson, UnknownKeysAreNamed) {
  EXPECT_EQ(error_key({{"sed", 1}}), "sed");
  EXPECT_EQ(error_key({{"servo", {{"gian", 1.0}}}}), "servo.gian");
  EXPECT_EQ(error_key({{"servo", {{"noise", {{"value", 0.0}}}}}}), "servo.noise.value");
  EXPECT_EQ(error_key({{"human", {{"durations", {{"dance", {{"median", 1.0}}}}}}}}),
            "human.durations.dance");
}

TEST(ConfigJson, WrongTypesAreNamed) {
  EXPECT_EQ(error_key({{"legs", "four"}}), "legs");
  EXPECT_EQ(error_key({{"legs", 2.5}}), "legs");
  EXPECT_EQ(error_key({{"seed", -1}}), "seed");
  EXPECT_EQ(error_key({{"robot", {{"homing", 1}}}}), "robot.homing");
  EXPECT_EQ(error_key({{"scene", {{"workspace_min", {0, 0}}}}}), "scene.workspace_min");
  EXPECT_EQ(error_key({{"human", {{"mode", "telepathy"}}}}), "human.mode");
  EXPECT_EQ(error_key({{"recognizer", {{"confusion", {1, 2}}}}}), "recognizer.confusion");
  EXPECT_EQ(error_key({{"servo", 3}}), "servo");
}

TEST(ConfigJson, ValidationNamesTheField) {
  EXPECT_EQ(error_key({{"legs", 5}}), "legs");
  EXPECT_EQ(error_key({{"episode_timeout_s", 0}}), "episode_timeout_s");
  EXPECT_EQ(error_key({{"fsm", {{"required_consecutive", 0}}}}), "fsm.required_consecutive");
  EXPECT_EQ(error_key({{"latency", {{"command_link_s", -0.1}}}}), "latency.command_link_s");
  EXPECT_EQ(error_key({{"servo", {{"gain", 60.0}}}}), "servo");
  EXPECT_EQ(error_key({{"human", {{"retry_probability", 2.0}}}}), "human");
  EXPECT_EQ(error_key({{"recognizer", {{"handover_grasp_recall", 1.5}}}}),
            "recognizer.handover_grasp_recall");
  EXPECT_EQ(error_key({{"recognizer", {{"no_assembly_scale", 0.0}}}}), "recognizer");
}

TEST(ConfigJson, OverridesParseJsonOrString) {
  json doc = json::object();
  apply_override(doc, "servo.gain", "3");
  apply_override(doc, "human.mode", "voice_command");
  apply_override(doc, "robot.homing", "false");
  apply_override(doc, "robot.home_pose", "[0.5, 0.0, 0.3]");
  apply_override(doc, "recognizer.handover_grasp_recall", "null");
  EXPECT_EQ(doc["servo"]["gain"], 3);
  EXPECT_EQ(doc["human"]["mode"], "voice_command");
  const auto cfg = episode_config_from_json(doc);
  EXPECT_EQ(cfg.servo.gain, 3.0);
  EXPECT_EQ(cfg.human.mode, HandoverMode::VoiceCommand);
  EXPECT_FALSE(cfg.robot.homing);
  EXPECT_DOUBLE_EQ(cfg.robot.home_pose.x(), 0.5);
  EXPECT_FALSE(cfg.recognizer.handover_grasp_recall.has_value());

  EXPECT_EQ(error_key(with("servo.gian", "1")), "servo.gian");
  EXPECT_EQ(error_key(with("legs", "many")), "legs");
}

TEST(ConfigJson, OverrideReplacesExistingValue) {
  json doc = to_json(EpisodeConfig{});
  apply_override(doc, "recognizer.per_class_recall.reach", "0.5");
  EXPECT_EQ(episode_config_from_json(doc).recognizer.per_class_recall[1], 0.5);
  EXPECT_THROW(apply_override(doc, "", "1"), ConfigError);
  EXPECT_THROW(apply_override(doc, "seed.x", "1"), ConfigError);
}

TEST(EpisodeConfig, OracleSettings) {
  const auto cfg = oracle_config(3);
  EXPECT_NO_THROW(cfg.validate());
  const auto m = cfg.recognizer.build_model();
  for (std::size_t i = 0; i < kActionCount; ++i) {
    EXPECT_EQ(m.confusion[i][i], 1.0);
  }
  EXPECT_EQ(cfg.servo.grasp_success_probability, 1.0);
}

TEST(EpisodeConfig, HandoverRecallOverrideAndRateDegradation) {
  EpisodeConfig cfg;
  EXPECT_EQ(cfg.recognizer.effective_recall()[index_of(AtomicAction::HumanGrasp)],
            kCalibratedHandoverGraspRecall);
  cfg.recognizer.handover_grasp_recall.reset();
  EXPECT_EQ(cfg.recognizer.effective_recall()[index_of(AtomicAction::HumanGrasp)], 0.17);
  cfg.recognizer.frame_rate = 15;
  EXPECT_NEAR(cfg.recognizer.effective_recall()[index_of(AtomicAction::HumanGrasp)], 0.17 * 0.75,
              1e-15);
}
