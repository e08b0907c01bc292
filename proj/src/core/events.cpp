#include "hrc/core/events.hpp"

#include <string>

#include "hrc/core/errors.hpp"

namespace hrc {
namespace {

using nlohmann::json;

constexpr std::array<std::string_view, 8> kKindNames{
    "fsm_transition", "action_predicted", "true_human_action", "servo_command",
    "grasp_attempt",  "release",          "human_retry",       "episode_end"};

template <typename Enum, typename Parser>
Enum enum_field(const json& j, const char* key, Parser parse) {
  const auto name = j.at(key).get<std::string>();
  auto value = parse(name);
  if (!value) {
    throw ValidationError(std::string("event field '") + key + "' has unknown value '" + name + "'");
  }
  return *value;
}

json payload_json(const FsmTransitionEvent& e) {
  json cmds = json::array();
  for (Command c : e.commands) {
    cmds.push_back(to_string(c));
  }
  return {{"from", to_string(e.from)}, {"to", to_string(e.to)}, {"commands", cmds},
          {"cycle", e.cycle}};
}

json payload_json(const ActionPredictedEvent& e) {
  return {{"frame", e.frame}, {"label", to_string(e.label)}, {"confidence", e.confidence}};
}

json payload_json(const TrueHumanActionEvent& e) {
  return {{"action", to_string(e.action)}, {"cycle", e.cycle}, {"attempt", e.attempt}};
}

json payload_json(const ServoCommandEvent& e) {
  return {{"control", vec3_to_json(e.control)}, {"v_min", e.v_min}, {"terminate", e.terminate},
          {"instance", e.instance},            {"cell", e.cell}};
}

json payload_json(const GraspAttemptEvent& e) {
  return {{"cycle", e.cycle},     {"attempt", e.attempt},        {"part", e.part},
          {"success", e.success}, {"align_error", e.align_error}};
}

json payload_json(const ReleaseEvent& e) {
  return {{"cycle", e.cycle},
          {"part", e.part},
          {"channel", to_string(e.channel)},
          {"consecutive_grasps", e.consecutive_grasps},
          {"human_grasping", e.human_grasping}};
}

json payload_json(const HumanRetryEvent& e) {
  return {{"cycle", e.cycle}, {"attempt", e.attempt}};
}

json payload_json(const EpisodeEndEvent& e) {
  return {{"outcome", to_string(e.outcome)},
          {"reason", to_string(e.reason)},
          {"at_cycle", e.at_cycle}};
}

EventPayload payload_from_json(EventKind kind, const json& j) {
  switch (kind) {
    case EventKind::FsmTransition: {
      FsmTransitionEvent e;
      e.from = enum_field<RobotFsmState>(j, "from", parse_robot_state);
      e.to = enum_field<RobotFsmState>(j, "to", parse_robot_state);
      for (const auto& c : j.at("commands")) {
        auto cmd = parse_command(c.get<std::string>());
        if (!cmd) {
          throw ValidationError("unknown command '" + c.get<std::string>() + "'");
        }
        e.commands.push_back(*cmd);
      }
      e.cycle = j.at("cycle").get<int>();
      return e;
    }
    case EventKind::ActionPredicted: {
      ActionPredictedEvent e;
      e.frame = j.at("frame").get<std::int64_t>();
      e.label = enum_field<AtomicAction>(j, "label", parse_action);
      e.confidence = j.at("confidence").get<ConfidenceVector>();
      return e;
    }
    case EventKind::TrueHumanAction: {
      TrueHumanActionEvent e;
      e.action = enum_field<AtomicAction>(j, "action", parse_action);
      e.cycle = j.at("cycle").get<int>();
      e.attempt = j.at("attempt").get<int>();
      return e;
    }
    case EventKind::ServoCommand: {
      ServoCommandEvent e;
      e.control = vec3_from_json(j.at("control"));
      e.v_min = j.at("v_min").get<double>();
      e.terminate = j.at("terminate").get<bool>();
      e.instance = j.at("instance").get<int>();
      e.cell = j.at("cell").get<int>();
      return e;
    }
    case EventKind::GraspAttempt: {
      GraspAttemptEvent e;
      e.cycle = j.at("cycle").get<int>();
      e.attempt = j.at("attempt").get<int>();
      e.part = j.at("part").get<int>();
      e.success = j.at("success").get<bool>();
      e.align_error = j.at("align_error").get<double>();
      return e;
    }
    case EventKind::Release: {
      ReleaseEvent e;
      e.cycle = j.at("cycle").get<int>();
      e.part = j.at("part").get<int>();
      e.channel = enum_field<HandoverMode>(j, "channel", parse_mode);
      e.consecutive_grasps = j.at("consecutive_grasps").get<int>();
      e.human_grasping = j.at("human_grasping").get<bool>();
      return e;
    }
    case EventKind::HumanRetry: {
      HumanRetryEvent e;
      e.cycle = j.at("cycle").get<int>();
      e.attempt = j.at("attempt").get<int>();
      return e;
    }
    case EventKind::EpisodeEnd: {
      EpisodeEndEvent e;
      e.outcome = enum_field<EpisodeOutcome>(j, "outcome", parse_outcome);
      e.reason = enum_field<FailureReason>(j, "reason", parse_failure_reason);
      e.at_cycle = j.at("at_cycle").get<int>();
      return e;
    }
  }
  throw ValidationError("unhandled event kind");
}

}  // namespace

std::string_view to_string(EventKind k) noexcept { return kKindNames[static_cast<std::size_t>(k)]; }

bool is_totally_ordered(const std::vector<SimEvent>& events) noexcept {
  for (std::size_t i = 1; i < events.size(); ++i) {
    const auto& a = events[i - 1];
    const auto& b = events[i];
    if (b.time < a.time || (b.time == a.time && b.seq <= a.seq)) {
      return false;
    }
  }
  return true;
}

json vec3_to_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

Vec3 vec3_from_json(const json& j) {
  if (!j.is_array() || j.size() != 3) {
    throw ValidationError("expected a 3-element array");
  }
  return Vec3(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

json to_json(const SimEvent& e) {
  json out = {{"t_us", e.time.us()}, {"seq", e.seq}, {"kind", to_string(e.kind())}};
  std::visit([&out](const auto& p) { out.update(payload_json(p)); }, e.payload);
  return out;
}

SimEvent event_from_json(const json& j) {
  try {
    const auto kind_name = j.at("kind").get<std::string>();
    std::optional<EventKind> kind;
    for (std::size_t i = 0; i < kKindNames.size(); ++i) {
      if (kKindNames[i] == kind_name) {
        kind = static_cast<EventKind>(i);
      }
    }
    if (!kind) {
      throw ValidationError("unknown event kind '" + kind_name + "'");
    }
    SimEvent e;
    e.time = SimTime::from_us(j.at("t_us").get<std::int64_t>());
    e.seq = j.at("seq").get<std::uint64_t>();
    e.payload = payload_from_json(*kind, j);
    return e;
  } catch (const json::exception& ex) {
    throw ValidationError(std::string("malformed event: ") + ex.what());
  }
}

}  // namespace hrc
