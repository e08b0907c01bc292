#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace hrc {

/// The closed, ordered vocabulary of human atomic actions.
enum class AtomicAction : std::uint8_t {
  NoAssemblyAction = 0,
  Reach,
  FlipTabletop,
  FlipTable,
  SpinLeg,
  AlignLeg,
  RotateTable,
  HumanGrasp,
};

inline constexpr std::size_t kActionCount = 8;

inline constexpr std::array<AtomicAction, kActionCount> kAllActions{
    AtomicAction::NoAssemblyAction, AtomicAction::Reach,     AtomicAction::FlipTabletop,
    AtomicAction::FlipTable,        AtomicAction::SpinLeg,   AtomicAction::AlignLeg,
    AtomicAction::RotateTable,      AtomicAction::HumanGrasp};

constexpr std::size_t index_of(AtomicAction a) noexcept { return static_cast<std::size_t>(a); }

enum class RobotFsmState : std::uint8_t { Home = 0, ReachAndGrasp, Pass, Idle, Handover, Finished };

inline constexpr std::array<RobotFsmState, 6> kAllRobotStates{
    RobotFsmState::Home, RobotFsmState::ReachAndGrasp, RobotFsmState::Pass,
    RobotFsmState::Idle, RobotFsmState::Handover,      RobotFsmState::Finished};

/// Commands the task logic issues to the arm controller.
enum class Command : std::uint8_t { MoveServo = 0, ExecuteGrasp, MoveToDelivery, OpenGripper };

inline constexpr std::array<Command, 4> kAllCommands{Command::MoveServo, Command::ExecuteGrasp,
                                                     Command::MoveToDelivery, Command::OpenGripper};

/// How the release of a handed-over part is triggered.
enum class HandoverMode : std::uint8_t { Vision = 0, VoiceCommand };

inline constexpr std::array<HandoverMode, 2> kAllModes{HandoverMode::Vision,
                                                       HandoverMode::VoiceCommand};

enum class EpisodeOutcome : std::uint8_t { FullSuccess = 0, Failed };

enum class FailureReason : std::uint8_t {
  None = 0,
  GraspFailed,
  HandoverFailed,
  PrematureRelease,
  Timeout,
};

// Stable lower_snake_case names used in traces and config files.
std::string_view to_string(AtomicAction a) noexcept;
std::string_view to_string(RobotFsmState s) noexcept;
std::string_view to_string(Command c) noexcept;
std::string_view to_string(HandoverMode m) noexcept;
std::string_view to_string(EpisodeOutcome o) noexcept;
std::string_view to_string(FailureReason r) noexcept;

std::optional<AtomicAction> parse_action(std::string_view name) noexcept;
std::optional<RobotFsmState> parse_robot_state(std::string_view name) noexcept;
std::optional<Command> parse_command(std::string_view name) noexcept;
std::optional<HandoverMode> parse_mode(std::string_view name) noexcept;
std::optional<EpisodeOutcome> parse_outcome(std::string_view name) noexcept;
std::optional<FailureReason> parse_failure_reason(std::string_view name) noexcept;

}  // namespace hrc
