#pragma once

#include <array>
#include <map>
#include <vector>

#include "hrc/core/events.hpp"
#include "hrc/core/names.hpp"
#include "hrc/core/rng.hpp"
#include "hrc/core/time.hpp"

namespace hrc::human {

struct LogNormal {
  double median = 1.0;      ///< seconds
  double dispersion = 0.25;  ///< sd of log(duration)
};

/// One step of a scripted human: the n-th occurrence of `action` takes `duration` seconds.
struct ScriptStep {
  AtomicAction action = AtomicAction::Reach;
  double duration = 1.0;
};

/// Durations are illustrative defaults; none are measured values.
std::map<AtomicAction, LogNormal> default_durations();

struct HumanConfig {
  std::map<AtomicAction, LogNormal> durations = default_durations();
  double retry_probability = 0.68;
  double retry_timeout = 4.0;  ///< seconds the human holds a grasp before giving up
  int max_handover_attempts = 2;
  double rotate_probability = 0.5;
  HandoverMode mode = HandoverMode::Vision;
  LogNormal voice_delay{1.9, 0.1};
  bool deterministic = false;  ///< every duration is its median
  bool initial_flip = true;    ///< flip the tabletop before the first leg
  std::vector<ScriptStep> script;

  /// Throws ValidationError.
  void validate() const;
};

enum class HumanPhase : std::uint8_t {
  WaitingForRobot = 0,
  Reaching,
  Grasping,
  Assembling,
  Rotating,
  Flipping,
  Done,
};

struct HumanState {
  HumanPhase phase = HumanPhase::WaitingForRobot;
  AtomicAction current_action = AtomicAction::NoAssemblyAction;
  SimTime phase_deadline;
  int legs_assembled = 0;
  int legs_received = 0;
  int legs_total = 4;
  int attempt = 0;      ///< handover attempt within the current cycle, 1-based once reaching
  bool failed = false;  ///< gave up on the handover; the cycle is lost
  std::array<int, kActionCount> occurrences{};  ///< per-action count, indexes the script

  /// Leg the current activity belongs to (1-based).
  int cycle() const noexcept;
};

/// Positive duration from the action's log-normal (the median in deterministic mode).
/// Throws ConfigError if the action has no configured distribution.
double sample_duration(AtomicAction action, const HumanConfig& cfg, Rng& rng);

HumanState initial_human_state(const HumanConfig& cfg, int legs_total, const Rng& stream,
                               SimTime now);

struct HumanTickResult {
  HumanState state;
  AtomicAction true_action = AtomicAction::NoAssemblyAction;
  std::vector<EventPayload> events;
};

/// Advance the scripted assembly cycle by one recognition tick.
///
/// `stream` is the human's root stream; every draw is taken from a sub-stream keyed by
/// (action, cycle, attempt) so paired runs in different modes see the same human.
HumanTickResult human_tick(const HumanState& state, RobotFsmState robot_state,
                           const HumanConfig& cfg, const Rng& stream, SimTime now);

/// Draw of the voice command latency for a given (cycle, attempt).
double sample_voice_delay(const HumanConfig& cfg, const Rng& stream, int cycle, int attempt);

}  // namespace hrc::human
