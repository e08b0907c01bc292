#pragma once

/**
 * Robot task logic.
 *
 *   Home ──servo active──► ReachAndGrasp ──grasped──► Pass ──at delivery──► Idle
 *    │  ▲                    │      ▲                                        │
 *    │  │                    └──────┘ grasp failed (re-servo)                │
 *    │  └────────── Handover ◄──────── release trigger (2 × human_grasp) ────┘
 *    └──assembly done──► Finished
 */

#include <nlohmann/json.hpp>
#include <optional>
#include <vector>

#include "hrc/core/names.hpp"

namespace hrc::fsm {

struct FsmInputs {
  bool servo_terminate = false;
  bool servo_assembly_done = false;
  std::optional<bool> grasp_succeeded;  ///< only meaningful in ReachAndGrasp
  bool at_delivery_point = false;
  bool release_trigger = false;
  int legs_remaining = 4;
};

struct FsmStep {
  RobotFsmState next = RobotFsmState::Home;
  std::vector<Command> commands;
};

/// Unique successor of (state, inputs). Undefined combinations throw ContractViolation.
///
/// A release_trigger seen in Pass is ignored here; the caller keeps it pending until Idle.
FsmStep fsm_step(RobotFsmState state, const FsmInputs& inputs);

/// Counter of consecutive human_grasp predictions gating the release.
struct HandoverTrigger {
  int consecutive_grasp_count = 0;
  int required = 2;
};

struct TriggerUpdate {
  HandoverTrigger trigger;
  bool release = false;
};

/// One recognition tick while the robot waits in Idle. Anything but a human_grasp
/// prediction (including no prediction) resets the count; the count resets after release.
TriggerUpdate handover_trigger_update(HandoverTrigger trigger,
                                      std::optional<AtomicAction> prediction);

/// Machine-readable transition table: [{from, when, to, commands}, ...].
nlohmann::json transition_table_json();

}  // namespace hrc::fsm
