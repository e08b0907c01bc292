#include "hrc/fsm/fsm.hpp"

#include <string>

#include "hrc/core/errors.hpp"

namespace hrc::fsm {
namespace {

[[noreturn]] void violation(RobotFsmState state, const std::string& what) {
  throw ContractViolation("fsm_step(" + std::string(to_string(state)) + "): " + what);
}

}  // namespace

FsmStep fsm_step(RobotFsmState state, const FsmInputs& in) {
  if (in.legs_remaining < 0 || in.legs_remaining > 4) {
    violation(state, "legs_remaining out of range");
  }
  if (in.grasp_succeeded && state != RobotFsmState::ReachAndGrasp) {
    violation(state, "grasp result outside reach_and_grasp");
  }

  switch (state) {
    case RobotFsmState::Home:
      if (in.servo_assembly_done != (in.legs_remaining == 0)) {
        violation(state, "servo assembly-done disagrees with legs_remaining");
      }
      if (in.servo_assembly_done) {
        return {RobotFsmState::Finished, {}};
      }
      return {RobotFsmState::ReachAndGrasp,
              {in.servo_terminate ? Command::ExecuteGrasp : Command::MoveServo}};

    case RobotFsmState::ReachAndGrasp:
      if (in.servo_assembly_done) {
        violation(state, "assembly done while reaching for a part");
      }
      if (in.grasp_succeeded) {
        if (*in.grasp_succeeded) {
          return {RobotFsmState::Pass, {Command::MoveToDelivery}};
        }
        return {RobotFsmState::ReachAndGrasp, {Command::MoveServo}};
      }
      return {RobotFsmState::ReachAndGrasp,
              {in.servo_terminate ? Command::ExecuteGrasp : Command::MoveServo}};

    case RobotFsmState::Pass:
      if (in.at_delivery_point) {
        return {RobotFsmState::Idle, {}};
      }
      return {RobotFsmState::Pass, {Command::MoveToDelivery}};

    case RobotFsmState::Idle:
      if (in.release_trigger) {
        return {RobotFsmState::Handover, {Command::OpenGripper}};
      }
      return {RobotFsmState::Idle, {}};

    case RobotFsmState::Handover:
      if (in.release_trigger) {
        violation(state, "second release while the gripper is already opening");
      }
      return {RobotFsmState::Home, {}};

    case RobotFsmState::Finished:
      violation(state, "finished is terminal");
  }
  violation(state, "unknown state");
}

TriggerUpdate handover_trigger_update(HandoverTrigger trigger,
                                      std::optional<AtomicAction> prediction) {
  if (prediction == AtomicAction::HumanGrasp) {
    ++trigger.consecutive_grasp_count;
  } else {
    trigger.consecutive_grasp_count = 0;
  }
  if (trigger.consecutive_grasp_count >= trigger.required) {
    trigger.consecutive_grasp_count = 0;
    return {trigger, true};
  }
  return {trigger, false};
}

nlohmann::json transition_table_json() {
  using nlohmann::json;
  auto row = [](RobotFsmState from, const char* when, RobotFsmState to,
                std::initializer_list<Command> cmds) {
    json c = json::array();
    for (Command cmd : cmds) {
      c.push_back(to_string(cmd));
    }
    return json{{"from", to_string(from)}, {"when", when}, {"to", to_string(to)}, {"commands", c}};
  };
  using S = RobotFsmState;
  using C = Command;
  return json::array({
      row(S::Home, "servo_active", S::ReachAndGrasp, {C::MoveServo}),
      row(S::Home, "servo_terminate", S::ReachAndGrasp, {C::ExecuteGrasp}),
      row(S::Home, "servo_assembly_done", S::Finished, {}),
      row(S::ReachAndGrasp, "servo_active", S::ReachAndGrasp, {C::MoveServo}),
      row(S::ReachAndGrasp, "servo_terminate", S::ReachAndGrasp, {C::ExecuteGrasp}),
      row(S::ReachAndGrasp, "grasp_succeeded", S::Pass, {C::MoveToDelivery}),
      row(S::ReachAndGrasp, "grasp_failed", S::ReachAndGrasp, {C::MoveServo}),
      row(S::Pass, "moving", S::Pass, {C::MoveToDelivery}),
      row(S::Pass, "at_delivery_point", S::Idle, {}),
      row(S::Idle, "waiting", S::Idle, {}),
      row(S::Idle, "release_trigger", S::Handover, {C::OpenGripper}),
      row(S::Handover, "released", S::Home, {}),
  });
}

}  // namespace hrc::fsm
