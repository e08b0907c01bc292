#include <gtest/gtest.h>

#include <map>

#include "hrc/core/errors.hpp"
#include "hrc/core/rng.hpp"
#include "hrc/fsm/fsm.hpp"

using namespace hrc;
using namespace hrc::fsm;

namespace {

FsmInputs with_legs(int legs) {
  FsmInputs in;
  in.legs_remaining = legs;
  return in;
}

}  // namespace

TEST(FsmStep, HomeStartsServoing) {
  const auto step = fsm_step(RobotFsmState::Home, with_legs(4));
  EXPECT_EQ(step.next, RobotFsmState::ReachAndGrasp);
  EXPECT_EQ(step.commands, std::vector<Command>{Command::MoveServo});
}

TEST(FsmStep, ReleaseThenHome) {
  auto in = with_legs(3);
  in.release_trigger = true;
  const auto step = fsm_step(RobotFsmState::Idle, in);
  EXPECT_EQ(step.next, RobotFsmState::Handover);
  EXPECT_EQ(step.commands, std::vector<Command>{Command::OpenGripper});
  const auto back = fsm_step(RobotFsmState::Handover, with_legs(2));
  EXPECT_EQ(back.next, RobotFsmState::Home);
  EXPECT_TRUE(back.commands.empty());
}

TEST(FsmStep, FinishesWhenAssemblyDone) {
  auto in = with_legs(0);
  in.servo_assembly_done = true;
  const auto step = fsm_step(RobotFsmState::Home, in);
  EXPECT_EQ(step.next, RobotFsmState::Finished);
  EXPECT_TRUE(step.commands.empty());
}

TEST(FsmStep, GraspOutcomes) {
  auto in = with_legs(4);
  in.grasp_succeeded = true;
  EXPECT_EQ(fsm_step(RobotFsmState::ReachAndGrasp, in).next, RobotFsmState::Pass);
  in.grasp_succeeded = false;
  const auto retry = fsm_step(RobotFsmState::ReachAndGrasp, in);
  EXPECT_EQ(retry.next, RobotFsmState::ReachAndGrasp);
  EXPECT_EQ(retry.commands, std::vector<Command>{Command::MoveServo});

  auto term = with_legs(4);
  term.servo_terminate = true;
  EXPECT_EQ(fsm_step(RobotFsmState::ReachAndGrasp, term).commands,
            std::vector<Command>{Command::ExecuteGrasp});
}

TEST(FsmStep, PassUntilDelivery) {
  EXPECT_EQ(fsm_step(RobotFsmState::Pass, with_legs(4)).next, RobotFsmState::Pass);
  auto in = with_legs(4);
  in.at_delivery_point = true;
  EXPECT_EQ(fsm_step(RobotFsmState::Pass, in).next, RobotFsmState::Idle);
  EXPECT_EQ(fsm_step(RobotFsmState::Idle, with_legs(4)).next, RobotFsmState::Idle);
}

TEST(FsmStep, UndefinedCombinationsAreViolations) {
  auto done_early = with_legs(2);
  done_early.servo_assembly_done = true;
  EXPECT_THROW(fsm_step(RobotFsmState::Home, done_early), ContractViolation);
  EXPECT_THROW(fsm_step(RobotFsmState::Home, with_legs(0)), ContractViolation);

  auto grasp_in_idle = with_legs(4);
  grasp_in_idle.grasp_succeeded = true;
  EXPECT_THROW(fsm_step(RobotFsmState::Idle, grasp_in_idle), ContractViolation);

  EXPECT_THROW(fsm_step(RobotFsmState::Finished, with_legs(0)), ContractViolation);
  EXPECT_THROW(fsm_step(RobotFsmState::Home, with_legs(5)), ContractViolation);
  EXPECT_THROW(fsm_step(RobotFsmState::Home, with_legs(-1)), ContractViolation);

  auto double_release = with_legs(3);
  double_release.release_trigger = true;
  EXPECT_THROW(fsm_step(RobotFsmState::Handover, double_release), ContractViolation);
}

TEST(FsmStep, IsPure) {
  Rng rng(5);
  for (int i = 0; i < 500; ++i) {
    const auto state = kAllRobotStates[static_cast<std::size_t>(rng.uniform() * 5)];
    FsmInputs in;
    in.servo_terminate = rng.bernoulli(0.5);
    in.at_delivery_point = rng.bernoulli(0.5);
    in.legs_remaining = 1 + static_cast<int>(rng.uniform() * 4);
    const auto a = fsm_step(state, in);
    const auto b = fsm_step(state, in);
    EXPECT_EQ(a.next, b.next);
    EXPECT_EQ(a.commands, b.commands);
  }
}

TEST(HandoverTrigger, Examples) {
  auto up = handover_trigger_update({1, 2}, AtomicAction::HumanGrasp);
  EXPECT_TRUE(up.release);
  EXPECT_EQ(up.trigger.consecutive_grasp_count, 0);

  up = handover_trigger_update({1, 2}, AtomicAction::Reach);
  EXPECT_FALSE(up.release);
  EXPECT_EQ(up.trigger.consecutive_grasp_count, 0);

  up = handover_trigger_update({0, 2}, std::nullopt);
  EXPECT_FALSE(up.release);
  EXPECT_EQ(up.trigger.consecutive_grasp_count, 0);

  up = handover_trigger_update({0, 3}, AtomicAction::HumanGrasp);
  EXPECT_FALSE(up.release);
  EXPECT_EQ(up.trigger.consecutive_grasp_count, 1);
}

// Over random prediction streams the count stays in [0, required] and every release is
// preceded by exactly `required` consecutive grasp predictions.
TEST(HandoverTrigger, RandomStreamsRespectBounds) {
  Rng rng(99);
  for (int required = 1; required <= 4; ++required) {
    HandoverTrigger t{0, required};
    int run = 0;
    for (int i = 0; i < 20000; ++i) {
      std::optional<AtomicAction> p;
      const double u = rng.uniform();
      if (u < 0.5) {
        p = AtomicAction::HumanGrasp;
      } else if (u < 0.9) {
        p = kAllActions[static_cast<std::size_t>(rng.uniform() * 7)];
      }
      run = p == AtomicAction::HumanGrasp ? run + 1 : 0;
      const auto up = handover_trigger_update(t, p);
      ASSERT_GE(up.trigger.consecutive_grasp_count, 0);
      ASSERT_LE(up.trigger.consecutive_grasp_count, required);
      if (up.release) {
        ASSERT_EQ(run, required);
        run = 0;
      }
      t = up.trigger;
    }
  }
}

// The exported table documents fsm_step: replaying each row's condition reproduces it.
TEST(TransitionTable, MatchesFsmStep) {
  const auto table = transition_table_json();
  ASSERT_EQ(table.size(), 12u);
  for (const auto& row : table) {
    const auto from = parse_robot_state(row.at("from").get<std::string>());
    const auto to = parse_robot_state(row.at("to").get<std::string>());
    ASSERT_TRUE(from && to);
    const std::string when = row.at("when");
    FsmInputs in = with_legs(2);
    if (when == "servo_terminate") {
      in.servo_terminate = true;
    } else if (when == "servo_assembly_done") {
      in.servo_assembly_done = true;
      in.legs_remaining = 0;
    } else if (when == "grasp_succeeded") {
      in.grasp_succeeded = true;
    } else if (when == "grasp_failed") {
      in.grasp_succeeded = false;
    } else if (when == "at_delivery_point") {
      in.at_delivery_point = true;
    } else if (when == "release_trigger") {
      in.release_trigger = true;
    }
    const auto step = fsm_step(*from, in);
    EXPECT_EQ(step.next, *to) << when;
    std::vector<std::string> cmds;
    for (Command c : step.commands) {
      cmds.emplace_back(to_string(c));
    }
    EXPECT_EQ(nlohmann::json(cmds), row.at("commands")) << when;
  }
}
