#pragma once

#include <cstdint>
#include <optional>

#include "hrc/core/scene.hpp"
#include "hrc/human/human.hpp"
#include "hrc/percept/percept.hpp"
#include "hrc/servo/servo.hpp"

namespace hrc::engine {

/// Trace / config document schema version.
inline constexpr int kSchemaVersion = 1;

/// In-system recall of human_grasp while the human's hand is closed on the presented part.
/// Chosen so two consecutive detections arrive within the default 4 s (40-frame) grasp
/// patience with probability 0.851.
inline constexpr double kCalibratedHandoverGraspRecall = 0.2376;

/// Storage table geometry. Not measured values.
struct SceneConfig {
  Vec3 workspace_min{0.35, -0.25, 0.0};
  Vec3 workspace_max{0.75, 0.25, 0.5};
  double part_radius = 0.03;
  double part_z = 0.02;  ///< height of a lying part's centre above the table
  double min_part_separation = 0.08;
};

struct RobotConfig {
  Vec3 home_pose{0.55, 0.0, 0.35};
  Vec3 delivery_point{0.0, 0.55, 0.30};
  double transit_speed = 0.25;  ///< m/s for homing and passing
  double grasp_duration = 1.5;  ///< s from termination to a grasp result
  bool homing = true;           ///< return to home_pose after every handover
};

struct RecognizerConfig {
  percept::ClassVector per_class_recall = percept::reference_recall();
  /// Overrides the human_grasp diagonal when set.
  std::optional<double> handover_grasp_recall = kCalibratedHandoverGraspRecall;
  percept::ClassVector priors = percept::default_priors();
  double no_assembly_fraction = 0.6;
  double no_assembly_scale = 0.5;
  double confidence_spread = 0.3;
  int window_len = 16;
  int frame_rate = 10;
  double trained_frame_rate = 10.0;
  double rate_mismatch_slope = 0.5;
  /// Explicit matrix; replaces the recall/priors construction entirely.
  std::optional<percept::ConfusionMatrix> confusion;

  /// Recall vector after the handover override and frame-rate degradation.
  percept::ClassVector effective_recall() const;
  percept::RecognizerModel build_model() const;
  void validate() const;
};

struct FsmConfig {
  int required_consecutive = 2;
  int max_grasp_attempts = 1;
};

/// Fixed per-link message latencies, seconds.
struct LatencyConfig {
  double recognition_link = 0.0;  ///< recognizer -> handover trigger
  double command_link = 0.0;      ///< task logic -> gripper
};

struct EpisodeConfig {
  std::uint64_t seed = 0;
  int legs = 4;
  double episode_timeout = 600.0;
  SceneConfig scene;
  RobotConfig robot;
  servo::ServoConfig servo;
  RecognizerConfig recognizer;
  human::HumanConfig human;
  FsmConfig fsm;
  LatencyConfig latency;

  /// Throws ValidationError naming the offending field.
  void validate() const;
};

/// Fault-free settings: identity confusion, noise-free servo, certain grasps.
EpisodeConfig oracle_config(std::uint64_t seed = 0);

}  // namespace hrc::engine
