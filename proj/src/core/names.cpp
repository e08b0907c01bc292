#include "hrc/core/names.hpp"

namespace hrc {
namespace {

constexpr std::array<std::string_view, kActionCount> kActionNames{
    "no_assembly_action", "reach",    "flip_tabletop", "flip_table",
    "spin_leg",           "align_leg", "rotate_table", "human_grasp"};

constexpr std::array<std::string_view, 6> kStateNames{"home", "reach_and_grasp", "pass",
                                                      "idle", "handover",        "finished"};

constexpr std::array<std::string_view, 4> kCommandNames{"move_servo", "execute_grasp",
                                                        "move_to_delivery", "open_gripper"};

constexpr std::array<std::string_view, 2> kModeNames{"vision", "voice_command"};

constexpr std::array<std::string_view, 2> kOutcomeNames{"full_success", "failed"};

constexpr std::array<std::string_view, 5> kReasonNames{"none", "grasp_failed", "handover_failed",
                                                       "premature_release", "timeout"};

template <typename Enum, std::size_t N>
std::optional<Enum> lookup(const std::array<std::string_view, N>& names, std::string_view name) {
  for (std::size_t i = 0; i < N; ++i) {
    if (names[i] == name) {
      return static_cast<Enum>(i);
    }
  }
  return std::nullopt;
}

}  // namespace

std::string_view to_string(AtomicAction a) noexcept { return kActionNames[index_of(a)]; }
std::string_view to_string(RobotFsmState s) noexcept {
  return kStateNames[static_cast<std::size_t>(s)];
}
std::string_view to_string(Command c) noexcept { return kCommandNames[static_cast<std::size_t>(c)]; }
std::string_view to_string(HandoverMode m) noexcept {
  return kModeNames[static_cast<std::size_t>(m)];
}
std::string_view to_string(EpisodeOutcome o) noexcept {
  return kOutcomeNames[static_cast<std::size_t>(o)];
}
std::string_view to_string(FailureReason r) noexcept {
  return kReasonNames[static_cast<std::size_t>(r)];
}

std::optional<AtomicAction> parse_action(std::string_view name) noexcept {
  return lookup<AtomicAction>(kActionNames, name);
}
std::optional<RobotFsmState> parse_robot_state(std::string_view name) noexcept {
  return lookup<RobotFsmState>(kStateNames, name);
}
std::optional<Command> parse_command(std::string_view name) noexcept {
  return lookup<Command>(kCommandNames, name);
}
std::optional<HandoverMode> parse_mode(std::string_view name) noexcept {
  // "voice" is accepted as a CLI shorthand.
  if (name == "voice") {
    return HandoverMode::VoiceCommand;
  }
  return lookup<HandoverMode>(kModeNames, name);
}
std::optional<EpisodeOutcome> parse_outcome(std::string_view name) noexcept {
  return lookup<EpisodeOutcome>(kOutcomeNames, name);
}
std::optional<FailureReason> parse_failure_reason(std::string_view name) noexcept {
  return lookup<FailureReason>(kReasonNames, name);
}

}  // namespace hrc
