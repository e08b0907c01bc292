#include "hrc/engine/engine.hpp"

#include <cmath>
#include <numbers>
#include <queue>
#include <string>

#include "hrc/core/errors.hpp"
#include "hrc/fsm/fsm.hpp"
#include "hrc/human/human.hpp"
#include "hrc/percept/percept.hpp"

namespace hrc::engine {
namespace {

enum class ItemKind : std::uint8_t {
  RecognitionTick,
  ServoTick,
  GraspComplete,
  PredictionDelivery,
  VoiceRelease,
  ReleaseCommand,
  Timeout,
};

struct Item {
  SimTime time;
  std::uint64_t order = 0;
  ItemKind kind = ItemKind::Timeout;
  std::int64_t index = 0;  // frame or tick number
  int cycle = 0;
  int attempt = 0;
  std::optional<AtomicAction> label;
};

struct Later {
  bool operator()(const Item& a, const Item& b) const noexcept {
    if (a.time != b.time) {
      return a.time > b.time;
    }
    return a.order > b.order;
  }
};

// Moves `p` toward `target` by at most `step`; true once it is there.
bool move_toward(Vec3& p, const Vec3& target, double step) {
  const Vec3 d = target - p;
  const double n = d.norm();
  if (n <= step) {
    p = target;
    return true;
  }
  p += d * (step / n);
  return false;
}

class Episode {
public:
  Episode(const EpisodeConfig& cfg, const EpisodeMeta& meta, const EpisodeHooks& hooks)
      : cfg_(cfg),
        hooks_(hooks),
        root_(cfg.seed),
        human_stream_(root_.derive("human")),
        percept_rng_(root_.derive("percept")),
        recognizer_(cfg.recognizer.build_model()) {
    trace_.config = cfg;
    trace_.meta = meta;
    scene_ = initial_scene(cfg);
    trigger_.required = cfg.fsm.required_consecutive;
  }

  EpisodeTrace run() {
    human_ = human::initial_human_state(cfg_.human, cfg_.legs, human_stream_, SimTime{});
    emit(SimTime{}, TrueHumanActionEvent{human_.current_action, human_.cycle(), 0});

    push(SimTime{}, ItemKind::RecognitionTick, 1);
    push(SimTime{}, ItemKind::ServoTick, 0);
    push(SimTime::from_seconds(cfg_.episode_timeout), ItemKind::Timeout);

    while (!ended_ && !queue_.empty()) {
      const Item item = queue_.top();
      queue_.pop();
      dispatch(item);
      if (!ended_) {
        check_outcome(item.time);
      }
    }
    return std::move(trace_);
  }

private:
  int cycle() const { return std::min(delivered_ + 1, cfg_.legs); }
  int legs_remaining() const { return cfg_.legs - delivered_; }

  void push(SimTime time, ItemKind kind, std::int64_t index = 0, int cycle = 0, int attempt = 0,
            std::optional<AtomicAction> label = std::nullopt) {
    queue_.push(Item{time, next_order_++, kind, index, cycle, attempt, label});
  }

  fsm::FsmInputs inputs() const {
    fsm::FsmInputs in;
    in.legs_remaining = legs_remaining();
    return in;
  }

  void emit(SimTime t, EventPayload payload) {
    trace_.events.push_back(SimEvent{t, next_seq_++, std::move(payload)});
  }

  void end(SimTime t, EpisodeOutcome outcome, FailureReason reason, int at_cycle) {
    emit(t, EpisodeEndEvent{outcome, reason, at_cycle});
    trace_.outcome = outcome;
    trace_.reason = reason;
    trace_.at_cycle = at_cycle;
    ended_ = true;
  }

  void transition(SimTime t, const fsm::FsmStep& step) {
    if (step.next != robot_) {
      emit(t, FsmTransitionEvent{robot_, step.next, step.commands, cycle()});
      if (step.next == RobotFsmState::Idle) {
        trigger_.consecutive_grasp_count = 0;
      }
      robot_ = step.next;
    }
  }

  Rng& servo_rng() {
    if (!servo_rng_ || servo_key_ != std::pair{cycle(), grasp_attempt_}) {
      servo_key_ = {cycle(), grasp_attempt_};
      servo_rng_ = root_.derive("servo")
                       .derive(static_cast<std::uint64_t>(cycle()))
                       .derive(static_cast<std::uint64_t>(grasp_attempt_));
    }
    return *servo_rng_;
  }

  void dispatch(const Item& item) {
    switch (item.kind) {
      case ItemKind::RecognitionTick:
        recognition_tick(item);
        break;
      case ItemKind::ServoTick:
        servo_tick(item);
        break;
      case ItemKind::GraspComplete:
        grasp_complete(item.time);
        break;
      case ItemKind::PredictionDelivery:
        deliver_prediction(item.time, item.label);
        break;
      case ItemKind::VoiceRelease:
        if (robot_ == RobotFsmState::Idle && human_.phase == human::HumanPhase::Grasping &&
            human_.cycle() == item.cycle && human_.attempt == item.attempt) {
          auto in = inputs();
          in.release_trigger = true;
          transition(item.time, fsm::fsm_step(RobotFsmState::Idle, in));
          release(item.time, HandoverMode::VoiceCommand, 0);
        }
        break;
      case ItemKind::ReleaseCommand:
        release(item.time, HandoverMode::Vision, item.attempt);
        break;
      case ItemKind::Timeout:
        end(item.time, EpisodeOutcome::Failed, FailureReason::Timeout, cycle());
        break;
    }
  }

  void recognition_tick(const Item& item) {
    const SimTime t = item.time;
    auto step = human::human_tick(human_, robot_, cfg_.human, human_stream_, t);
    human_ = std::move(step.state);
    for (auto& e : step.events) {
      if (const auto* a = std::get_if<TrueHumanActionEvent>(&e);
          a != nullptr && a->action == AtomicAction::HumanGrasp &&
          cfg_.human.mode == HandoverMode::VoiceCommand) {
        const double delay =
            human::sample_voice_delay(cfg_.human, human_stream_, a->cycle, a->attempt);
        push(t + SimTime::from_seconds(delay), ItemKind::VoiceRelease, 0, a->cycle, a->attempt);
      }
      emit(t, std::move(e));
    }

    // One draw per predicted frame, so draw k always belongs to frame k + window - 1.
    const auto prediction = recognizer_.tick(item.index, step.true_action, percept_rng_);
    std::optional<AtomicAction> label;
    if (prediction) {
      label = prediction->label;
      emit(t, ActionPredictedEvent{prediction->frame_index, prediction->label,
                                   prediction->confidence});
    }

    if (cfg_.human.mode == HandoverMode::Vision && robot_ == RobotFsmState::Idle) {
      if (cfg_.latency.recognition_link > 0.0) {
        push(t + SimTime::from_seconds(cfg_.latency.recognition_link),
             ItemKind::PredictionDelivery, 0, 0, 0, label);
      } else {
        deliver_prediction(t, label);
      }
    }

    push(tick_time(item.index, cfg_.recognizer.frame_rate), ItemKind::RecognitionTick,
         item.index + 1);
  }

  void deliver_prediction(SimTime t, std::optional<AtomicAction> label) {
    if (robot_ != RobotFsmState::Idle) {
      return;
    }
    const auto update = fsm::handover_trigger_update(trigger_, label);
    const int count = update.release ? trigger_.consecutive_grasp_count + 1 : 0;
    trigger_ = update.trigger;
    if (!update.release) {
      return;
    }
    auto in = inputs();
    in.release_trigger = true;
    transition(t, fsm::fsm_step(RobotFsmState::Idle, in));
    if (cfg_.latency.command_link > 0.0) {
      push(t + SimTime::from_seconds(cfg_.latency.command_link), ItemKind::ReleaseCommand, 0, 0,
           count);
    } else {
      release(t, HandoverMode::Vision, count);
    }
  }

  void release(SimTime t, HandoverMode channel, int consecutive) {
    const bool grasping = human_.phase == human::HumanPhase::Grasping && !human_.failed;
    const int released_cycle = cycle();
    emit(t, ReleaseEvent{released_cycle, scene_.holding.value_or(-1), channel, consecutive,
                         grasping});
    scene_.holding.reset();
    ++delivered_;
    grasp_attempt_ = 1;
    trace_.cycle_boundaries.push_back(t);
    transition(t, fsm::fsm_step(RobotFsmState::Handover, inputs()));
    if (!grasping) {
      end(t, EpisodeOutcome::Failed, FailureReason::PrematureRelease, released_cycle);
    }
  }

  void run_servo(SimTime t, const servo::ServoTickResult& st, const std::vector<Command>& cmds) {
    if (st.selection) {
      const auto& sel = *st.selection;
      emit(t, ServoCommandEvent{st.control, sel.v_min, st.terminate, sel.instance_id,
                                static_cast<int>(sel.cell_index)});
    }
    for (Command c : cmds) {
      if (c == Command::ExecuteGrasp) {
        grasp_pending_ = true;
        push(t + SimTime::from_seconds(cfg_.robot.grasp_duration), ItemKind::GraspComplete);
      } else if (c == Command::MoveServo) {
        scene_.ee += st.control / static_cast<double>(cfg_.servo.tick_rate);
      }
    }
  }

  servo::ServoTickResult evaluate_servo(SimTime t) {
    if (hooks_.on_grid) {
      servo::LyapunovGrid grid;
      auto st = servo::servo_tick(scene_, cfg_.servo, servo_rng(), &grid);
      hooks_.on_grid(grid, t);
      return st;
    }
    return servo::servo_tick(scene_, cfg_.servo, servo_rng());
  }

  void servo_tick(const Item& item) {
    const SimTime t = item.time;
    const double step = cfg_.robot.transit_speed / static_cast<double>(cfg_.servo.tick_rate);
    switch (robot_) {
      case RobotFsmState::Home: {
        if (cfg_.robot.homing && !move_toward(scene_.ee, cfg_.robot.home_pose, step)) {
          break;
        }
        const auto st = evaluate_servo(t);
        auto in = inputs();
        in.servo_terminate = st.terminate;
        in.servo_assembly_done = st.assembly_done;
        const auto next = fsm::fsm_step(RobotFsmState::Home, in);
        transition(t, next);
        if (next.next == RobotFsmState::ReachAndGrasp) {
          run_servo(t, st, next.commands);
        }
        break;
      }
      case RobotFsmState::ReachAndGrasp: {
        if (grasp_pending_) {
          break;
        }
        const auto st = evaluate_servo(t);
        auto in = inputs();
        in.servo_terminate = st.terminate;
        const auto next = fsm::fsm_step(RobotFsmState::ReachAndGrasp, in);
        run_servo(t, st, next.commands);
        break;
      }
      case RobotFsmState::Pass: {
        const bool there = move_toward(scene_.ee, cfg_.robot.delivery_point, step);
        if (scene_.holding) {
          if (Part* p = scene_.find_part(*scene_.holding)) {
            p->position = scene_.ee;
          }
        }
        auto in = inputs();
        in.at_delivery_point = there;
        transition(t, fsm::fsm_step(RobotFsmState::Pass, in));
        break;
      }
      default:
        break;
    }
    push(tick_time(item.index + 1, cfg_.servo.tick_rate), ItemKind::ServoTick, item.index + 1);
  }

  void grasp_complete(SimTime t) {
    grasp_pending_ = false;
    Rng rng = root_.derive("grasp")
                  .derive(static_cast<std::uint64_t>(cycle()))
                  .derive(static_cast<std::uint64_t>(grasp_attempt_));
    auto result = servo::execute_grasp(scene_, cfg_.servo, rng);
    scene_ = std::move(result.scene);
    emit(t, GraspAttemptEvent{cycle(), grasp_attempt_, result.part_id, result.success,
                              result.align_error});
    auto in = inputs();
    in.grasp_succeeded = result.success;
    const auto next = fsm::fsm_step(RobotFsmState::ReachAndGrasp, in);
    if (!result.success) {
      if (grasp_attempt_ >= cfg_.fsm.max_grasp_attempts) {
        end(t, EpisodeOutcome::Failed, FailureReason::GraspFailed, cycle());
        return;
      }
      ++grasp_attempt_;
    }
    transition(t, next);
  }

  void check_outcome(SimTime t) {
    if (human_.failed) {
      end(t, EpisodeOutcome::Failed, FailureReason::HandoverFailed, human_.cycle());
    } else if (robot_ == RobotFsmState::Finished && human_.phase == human::HumanPhase::Done) {
      end(t, EpisodeOutcome::FullSuccess, FailureReason::None, cfg_.legs);
    }
  }

  const EpisodeConfig& cfg_;
  const EpisodeHooks& hooks_;
  Rng root_;
  Rng human_stream_;
  Rng percept_rng_;
  percept::Recognizer recognizer_;
  EpisodeTrace trace_;
  Scene scene_;
  human::HumanState human_;
  RobotFsmState robot_ = RobotFsmState::Home;
  fsm::HandoverTrigger trigger_;
  int delivered_ = 0;
  int grasp_attempt_ = 1;
  bool grasp_pending_ = false;
  bool ended_ = false;
  std::optional<Rng> servo_rng_;
  std::pair<int, int> servo_key_{0, 0};
  std::priority_queue<Item, std::vector<Item>, Later> queue_;
  std::uint64_t next_order_ = 0;
  std::uint64_t next_seq_ = 0;
};

}  // namespace

Scene initial_scene(const EpisodeConfig& cfg) {
  const auto& sc = cfg.scene;
  Scene scene;
  scene.workspace = Box{sc.workspace_min, sc.workspace_max};
  scene.part_radius = sc.part_radius;
  scene.ee = cfg.robot.home_pose;

  Rng rng = Rng(cfg.seed).derive("scene");
  const double lo_x = sc.workspace_min.x() + sc.part_radius;
  const double hi_x = sc.workspace_max.x() - sc.part_radius;
  const double lo_y = sc.workspace_min.y() + sc.part_radius;
  const double hi_y = sc.workspace_max.y() - sc.part_radius;
  if (!(hi_x > lo_x && hi_y > lo_y)) {
    throw ConfigError("scene.part_radius", "parts do not fit in the workspace");
  }
  constexpr int kMaxTries = 10000;
  for (int id = 0; id < cfg.legs; ++id) {
    int tries = 0;
    while (true) {
      const Vec3 p{rng.uniform(lo_x, hi_x), rng.uniform(lo_y, hi_y), sc.part_z};
      bool clear = true;
      for (const auto& other : scene.parts) {
        clear = clear && planar_distance(p, other.position) >= sc.min_part_separation;
      }
      if (clear) {
        scene.parts.push_back(
            Part{id, p, rng.uniform(-std::numbers::pi, std::numbers::pi), false});
        break;
      }
      if (++tries >= kMaxTries) {
        throw ConfigError("scene.min_part_separation", "cannot place all parts");
      }
    }
  }
  return scene;
}

EpisodeTrace run_episode(const EpisodeConfig& cfg, const EpisodeMeta& meta,
                         const EpisodeHooks& hooks) {
  cfg.validate();
  return Episode(cfg, meta, hooks).run();
}

std::vector<EpisodeJob> plan_jobs(const EpisodeConfig& base, const ExperimentPlan& plan) {
  if (plan.repetitions < 1 || plan.participants < 1) {
    throw ValidationError("experiment needs at least 1 participant and 1 repetition");
  }
  if (plan.modes.empty()) {
    throw ValidationError("experiment needs at least one mode");
  }
  const auto per_mode = static_cast<std::uint64_t>(plan.participants) *
                        static_cast<std::uint64_t>(plan.repetitions);
  std::vector<EpisodeJob> jobs;
  int index = 0;
  for (int p = 0; p < plan.participants; ++p) {
    for (int r = 0; r < plan.repetitions; ++r) {
      const std::uint64_t i = static_cast<std::uint64_t>(p) * plan.repetitions + r;
      for (std::size_t m = 0; m < plan.modes.size(); ++m) {
        EpisodeJob job{base, {p, r, index++}};
        job.config.human.mode = plan.modes[m];
        job.config.seed = plan.seed_base + i + (plan.paired ? 0 : m * per_mode);
        jobs.push_back(std::move(job));
      }
    }
  }
  return jobs;
}

ExperimentResults run_experiment(const EpisodeConfig& base, const ExperimentPlan& plan) {
  base.validate();
  const auto jobs = plan_jobs(base, plan);
  ExperimentResults out;
  out.traces = parallel_map(
      jobs.size(), [&](std::size_t i) { return run_episode(jobs[i].config, jobs[i].meta); },
      plan.threads);
  return out;
}

}  // namespace hrc::engine
