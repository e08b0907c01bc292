#include "hrc/human/human.hpp"

#include <cmath>
#include <string>

#include "hrc/core/errors.hpp"

namespace hrc::human {
namespace {

constexpr SimTime kNever = SimTime::from_us(INT64_MAX / 2);

bool robot_released(RobotFsmState s) noexcept {
  return s != RobotFsmState::Idle && s != RobotFsmState::Handover;
}

bool valid_lognormal(const LogNormal& d) { return d.median > 0.0 && d.dispersion >= 0.0; }

class Stepper {
public:
  Stepper(HumanState state, const HumanConfig& cfg, const Rng& stream, SimTime now)
      : s_(std::move(state)), cfg_(cfg), stream_(stream), now_(now) {}

  HumanTickResult run(RobotFsmState robot) {
    // Several phases may end on the same tick when scripted durations are shorter than a tick.
    for (int guard = 0; guard < 16 && step(robot); ++guard) {
    }
    const AtomicAction action = s_.current_action;
    return {std::move(s_), action, std::move(events_)};
  }

  void enter(HumanPhase phase, AtomicAction action, SimTime deadline) {
    s_.phase = phase;
    s_.phase_deadline = deadline;
    if (action != s_.current_action) {
      s_.current_action = action;
      events_.emplace_back(TrueHumanActionEvent{action, s_.cycle(), s_.attempt});
    }
  }

  // Draws are keyed by (action, cycle, attempt) only, never by how many draws came before.
  SimTime timed(AtomicAction action, int cycle, int attempt = 0) {
    double d = 0.0;
    const auto idx = index_of(action);
    if (!cfg_.script.empty()) {
      d = scripted(action, s_.occurrences[idx]);
    } else {
      Rng r = stream_.derive(to_string(action))
                  .derive(static_cast<std::uint64_t>(cycle))
                  .derive(static_cast<std::uint64_t>(attempt));
      d = sample_duration(action, cfg_, r);
    }
    ++s_.occurrences[idx];
    return now_ + SimTime::from_seconds(d);
  }

  HumanState& state() { return s_; }

private:
  double scripted(AtomicAction action, int occurrence) const {
    int seen = 0;
    for (const auto& step : cfg_.script) {
      if (step.action == action && seen++ == occurrence) {
        return step.duration;
      }
    }
    throw ConfigError("human.script", "no entry for occurrence " + std::to_string(occurrence + 1) +
                                          " of '" + std::string(to_string(action)) + "'");
  }

  bool draw(std::string_view label, int attempt, double p) const {
    Rng r = stream_.derive(label)
                .derive(static_cast<std::uint64_t>(s_.cycle()))
                .derive(static_cast<std::uint64_t>(attempt));
    return r.uniform() < p;
  }

  void start_reach() {
    const SimTime deadline = timed(AtomicAction::Reach, s_.legs_received + 1, s_.attempt);
    enter(HumanPhase::Reaching, AtomicAction::Reach, deadline);
  }

  bool due() const { return now_ >= s_.phase_deadline; }

  // Returns true if a transition happened.
  bool step(RobotFsmState robot) {
    switch (s_.phase) {
      case HumanPhase::Flipping:
        if (!due()) {
          return false;
        }
        if (s_.current_action == AtomicAction::FlipTable) {
          enter(HumanPhase::Done, AtomicAction::NoAssemblyAction, kNever);
        } else {
          enter(HumanPhase::WaitingForRobot, AtomicAction::NoAssemblyAction, kNever);
        }
        return true;

      case HumanPhase::WaitingForRobot:
        if (robot != RobotFsmState::Idle || s_.legs_received >= s_.legs_total) {
          return false;
        }
        s_.attempt = 1;
        start_reach();
        return true;

      case HumanPhase::Reaching:
        if (!due()) {
          return false;
        }
        enter(HumanPhase::Grasping, AtomicAction::HumanGrasp,
              cfg_.mode == HandoverMode::Vision ? now_ + SimTime::from_seconds(cfg_.retry_timeout)
                                                : kNever);
        ++s_.occurrences[index_of(AtomicAction::HumanGrasp)];
        return true;

      case HumanPhase::Grasping:
        if (robot_released(robot)) {
          ++s_.legs_received;
          const SimTime deadline = timed(AtomicAction::AlignLeg, s_.legs_received);
          enter(HumanPhase::Assembling, AtomicAction::AlignLeg, deadline);
          return true;
        }
        if (cfg_.mode != HandoverMode::Vision || !due() || s_.failed) {
          return false;
        }
        if (s_.attempt < cfg_.max_handover_attempts &&
            draw("retry", s_.attempt, cfg_.retry_probability)) {
          ++s_.attempt;
          events_.emplace_back(HumanRetryEvent{s_.cycle(), s_.attempt});
          start_reach();
          return true;
        }
        s_.failed = true;
        return false;

      case HumanPhase::Assembling:
        if (!due()) {
          return false;
        }
        if (s_.current_action == AtomicAction::AlignLeg) {
          const SimTime deadline = timed(AtomicAction::SpinLeg, s_.legs_received);
          enter(HumanPhase::Assembling, AtomicAction::SpinLeg, deadline);
          return true;
        }
        ++s_.legs_assembled;
        if (s_.legs_assembled >= s_.legs_total) {
          const SimTime deadline = timed(AtomicAction::FlipTable, s_.legs_total);
          enter(HumanPhase::Flipping, AtomicAction::FlipTable, deadline);
        } else if (draw("rotate", 0, cfg_.rotate_probability)) {
          const SimTime deadline = timed(AtomicAction::RotateTable, s_.legs_received);
          enter(HumanPhase::Rotating, AtomicAction::RotateTable, deadline);
        } else {
          enter(HumanPhase::WaitingForRobot, AtomicAction::NoAssemblyAction, kNever);
        }
        return true;

      case HumanPhase::Rotating:
        if (!due()) {
          return false;
        }
        enter(HumanPhase::WaitingForRobot, AtomicAction::NoAssemblyAction, kNever);
        return true;

      case HumanPhase::Done:
        return false;
    }
    return false;
  }

  HumanState s_;
  const HumanConfig& cfg_;
  const Rng& stream_;
  SimTime now_;
  std::vector<EventPayload> events_;
};

}  // namespace

std::map<AtomicAction, LogNormal> default_durations() {
  return {
      {AtomicAction::Reach, {1.5, 0.25}},        {AtomicAction::AlignLeg, {4.0, 0.25}},
      {AtomicAction::SpinLeg, {8.0, 0.25}},      {AtomicAction::RotateTable, {3.0, 0.25}},
      {AtomicAction::FlipTabletop, {5.0, 0.25}}, {AtomicAction::FlipTable, {5.0, 0.25}},
  };
}

void HumanConfig::validate() const {
  for (const auto& [action, dist] : durations) {
    if (!valid_lognormal(dist)) {
      throw ValidationError("human duration for '" + std::string(to_string(action)) +
                            "' needs median > 0 and dispersion >= 0");
    }
  }
  auto prob = [](double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw ValidationError(std::string("human ") + name + " must be in [0, 1]");
    }
  };
  prob(retry_probability, "retry_probability");
  prob(rotate_probability, "rotate_probability");
  if (!(retry_timeout > 0.0)) {
    throw ValidationError("human retry_timeout must be > 0");
  }
  if (max_handover_attempts < 1) {
    throw ValidationError("human max_handover_attempts must be >= 1");
  }
  if (!valid_lognormal(voice_delay)) {
    throw ValidationError("human voice_delay needs median > 0 and dispersion >= 0");
  }
  for (const auto& step : script) {
    if (!(step.duration > 0.0)) {
      throw ValidationError("human script durations must be > 0");
    }
  }
}

int HumanState::cycle() const noexcept {
  switch (phase) {
    case HumanPhase::Assembling:
    case HumanPhase::Rotating:
      return legs_received;
    case HumanPhase::Flipping:
    case HumanPhase::Done:
      return current_action == AtomicAction::FlipTabletop ? 0 : legs_total;
    default:
      return legs_received + 1;
  }
}

double sample_duration(AtomicAction action, const HumanConfig& cfg, Rng& rng) {
  const auto it = cfg.durations.find(action);
  if (it == cfg.durations.end()) {
    throw ConfigError("human.durations." + std::string(to_string(action)),
                      "no duration distribution configured");
  }
  if (cfg.deterministic) {
    return it->second.median;
  }
  return it->second.median * std::exp(it->second.dispersion * rng.normal());
}

HumanState initial_human_state(const HumanConfig& cfg, int legs_total, const Rng& stream,
                               SimTime now) {
  HumanState s;
  s.legs_total = legs_total;
  if (!cfg.initial_flip) {
    return s;
  }
  Stepper stepper(s, cfg, stream, now);
  stepper.state().phase = HumanPhase::Flipping;
  stepper.state().current_action = AtomicAction::FlipTabletop;
  stepper.state().phase_deadline = stepper.timed(AtomicAction::FlipTabletop, 0);
  return stepper.state();
}

HumanTickResult human_tick(const HumanState& state, RobotFsmState robot_state,
                           const HumanConfig& cfg, const Rng& stream, SimTime now) {
  return Stepper(state, cfg, stream, now).run(robot_state);
}

double sample_voice_delay(const HumanConfig& cfg, const Rng& stream, int cycle, int attempt) {
  Rng r = stream.derive("voice_delay")
              .derive(static_cast<std::uint64_t>(cycle))
              .derive(static_cast<std::uint64_t>(attempt));
  if (cfg.deterministic) {
    return cfg.voice_delay.median;
  }
  return cfg.voice_delay.median * std::exp(cfg.voice_delay.dispersion * r.normal());
}

}  // namespace hrc::human
