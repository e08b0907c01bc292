#pragma once

#include <array>
#include <cstdint>
#include <nlohmann/json.hpp>
#include <string_view>
#include <variant>
#include <vector>

#include "hrc/core/names.hpp"
#include "hrc/core/scene.hpp"
#include "hrc/core/time.hpp"

namespace hrc {

using ConfidenceVector = std::array<double, kActionCount>;

struct FsmTransitionEvent {
  RobotFsmState from = RobotFsmState::Home;
  RobotFsmState to = RobotFsmState::Home;
  std::vector<Command> commands;
  int cycle = 0;
};

struct ActionPredictedEvent {
  std::int64_t frame = 0;
  AtomicAction label = AtomicAction::NoAssemblyAction;
  ConfidenceVector confidence{};
};

/// Ground truth human activity change. For HumanGrasp this marks hand closure
/// (vision) or command issue (voice), the handover-time origin.
struct TrueHumanActionEvent {
  AtomicAction action = AtomicAction::NoAssemblyAction;
  int cycle = 0;
  int attempt = 0;
};

struct ServoCommandEvent {
  Vec3 control{0.0, 0.0, 0.0};
  double v_min = 0.0;
  bool terminate = false;
  int instance = -1;
  int cell = -1;
};

struct GraspAttemptEvent {
  int cycle = 0;
  int attempt = 0;
  int part = -1;
  bool success = false;
  double align_error = 0.0;
};

struct ReleaseEvent {
  int cycle = 0;
  int part = -1;
  HandoverMode channel = HandoverMode::Vision;
  int consecutive_grasps = 0;  ///< trigger count that fired the release (vision)
  bool human_grasping = false;  ///< false == part dropped (premature release)
};

struct HumanRetryEvent {
  int cycle = 0;
  int attempt = 0;  ///< the attempt about to start
};

struct EpisodeEndEvent {
  EpisodeOutcome outcome = EpisodeOutcome::FullSuccess;
  FailureReason reason = FailureReason::None;
  int at_cycle = 0;
};

/// Alternative order matches EventKind.
using EventPayload =
    std::variant<FsmTransitionEvent, ActionPredictedEvent, TrueHumanActionEvent, ServoCommandEvent,
                 GraspAttemptEvent, ReleaseEvent, HumanRetryEvent, EpisodeEndEvent>;

enum class EventKind : std::uint8_t {
  FsmTransition = 0,
  ActionPredicted,
  TrueHumanAction,
  ServoCommand,
  GraspAttempt,
  Release,
  HumanRetry,
  EpisodeEnd,
};

std::string_view to_string(EventKind k) noexcept;

struct SimEvent {
  SimTime time;
  std::uint64_t seq = 0;
  EventPayload payload;

  EventKind kind() const noexcept { return static_cast<EventKind>(payload.index()); }

  template <typename T>
  const T* as() const noexcept {
    return std::get_if<T>(&payload);
  }
};

/// (time, seq) is strictly increasing along the trace.
bool is_totally_ordered(const std::vector<SimEvent>& events) noexcept;

nlohmann::json to_json(const SimEvent& e);
/// Throws ValidationError on unknown kind or missing fields.
SimEvent event_from_json(const nlohmann::json& j);

nlohmann::json vec3_to_json(const Vec3& v);
Vec3 vec3_from_json(const nlohmann::json& j);

}  // namespace hrc
