#include <gtest/gtest.h>

#include <sstream>

#include "hrc/core/errors.hpp"
#include "hrc/engine/engine.hpp"
#include "hrc/eval/metrics.hpp"

using namespace hrc;
using namespace hrc::engine;
using namespace hrc::eval;

namespace {

// Builds a trace event by event with times in seconds.
struct TraceBuilder {
  EpisodeTrace trace;
  std::uint64_t seq = 0;
  RobotFsmState robot = RobotFsmState::Home;
  double scale = 1.0;

  void add(double t, EventPayload p) {
    trace.events.push_back(SimEvent{SimTime::from_seconds(t * scale), seq++, std::move(p)});
  }
  void robot_to(double t, RobotFsmState to, int cycle = 1) {
    add(t, FsmTransitionEvent{robot, to, {}, cycle});
    robot = to;
  }
  void human(double t, AtomicAction a, int cycle = 1, int attempt = 1) {
    add(t, TrueHumanActionEvent{a, cycle, attempt});
  }
  void release(double t, int cycle, bool grasping = true) {
    add(t, ReleaseEvent{cycle, cycle - 1, HandoverMode::Vision, 2, grasping});
    trace.cycle_boundaries.push_back(SimTime::from_seconds(t * scale));
  }
  void end(double t, EpisodeOutcome o, FailureReason r, int at_cycle) {
    add(t, EpisodeEndEvent{o, r, at_cycle});
    trace.outcome = o;
    trace.reason = r;
    trace.at_cycle = at_cycle;
  }
};

// One 50 s cycle: the human is idle for 5 s while the robot still servos, the robot waits
// in Idle for 4 s, hand closure at 45 s.
EpisodeTrace fifty_second_cycle(double scale = 1.0) {
  TraceBuilder b;
  b.scale = scale;
  b.human(0.0, AtomicAction::SpinLeg);
  b.robot_to(0.0, RobotFsmState::ReachAndGrasp);
  b.add(30.0, GraspAttemptEvent{1, 1, 0, true, 0.0});
  b.human(40.0, AtomicAction::NoAssemblyAction);
  b.robot_to(44.0, RobotFsmState::Pass);
  b.human(45.0, AtomicAction::HumanGrasp);
  b.robot_to(46.0, RobotFsmState::Idle);
  b.robot_to(50.0, RobotFsmState::Handover);
  b.release(50.0, 1);
  b.robot_to(50.0, RobotFsmState::Home);
  b.end(60.0, EpisodeOutcome::Failed, FailureReason::Timeout, 1);
  return b.trace;
}

}  // namespace

TEST(CycleMetrics, HandoverTimeIsReleaseMinusClosure) {
  TraceBuilder b;
  b.robot_to(2.0, RobotFsmState::ReachAndGrasp);
  b.add(4.0, GraspAttemptEvent{1, 1, 0, true, 0.0});
  b.robot_to(4.0, RobotFsmState::Pass);
  b.robot_to(8.0, RobotFsmState::Idle);
  b.human(9.0, AtomicAction::Reach);
  b.human(10.0, AtomicAction::HumanGrasp);
  b.robot_to(10.4, RobotFsmState::Handover);
  b.release(10.4, 1);
  b.end(10.4, EpisodeOutcome::Failed, FailureReason::Timeout, 1);
  const auto m = compute_cycle_metrics(b.trace);
  ASSERT_EQ(m.size(), 1u);
  ASSERT_TRUE(m[0].handover_time);
  EXPECT_NEAR(*m[0].handover_time, 0.4, 1e-12);
  EXPECT_NEAR(m[0].cycle_time, 10.4, 1e-12);
  EXPECT_TRUE(m[0].succeeded);
  EXPECT_EQ(m[0].grasp_attempts, 1);
  EXPECT_EQ(m[0].handover_attempts, 1);
}

TEST(CycleMetrics, FluencyRatios) {
  const auto m = compute_cycle_metrics(fifty_second_cycle());
  ASSERT_EQ(m.size(), 1u);
  EXPECT_NEAR(m[0].cycle_time, 50.0, 1e-12);
  EXPECT_NEAR(m[0].h_idle, 0.10, 1e-12);
  EXPECT_NEAR(m[0].r_idle, 0.08, 1e-12);
  EXPECT_NEAR(m[0].c_act, 0.82, 1e-12);
  EXPECT_NEAR(*m[0].handover_time, 5.0, 1e-12);
}

TEST(CycleMetrics, RatiosAreScaleInvariant) {
  const auto a = compute_cycle_metrics(fifty_second_cycle(1.0));
  const auto b = compute_cycle_metrics(fifty_second_cycle(2.5));
  ASSERT_EQ(a.size(), b.size());
  EXPECT_NEAR(a[0].h_idle, b[0].h_idle, 1e-12);
  EXPECT_NEAR(a[0].r_idle, b[0].r_idle, 1e-12);
  EXPECT_NEAR(a[0].c_act, b[0].c_act, 1e-12);
  EXPECT_NEAR(b[0].cycle_time, 2.5 * a[0].cycle_time, 1e-9);
}

TEST(CycleMetrics, FailedCycleHasNoHandoverTime) {
  TraceBuilder b;
  b.robot_to(0.0, RobotFsmState::ReachAndGrasp);
  b.add(3.0, GraspAttemptEvent{1, 1, 0, false, 0.02});
  b.end(3.0, EpisodeOutcome::Failed, FailureReason::GraspFailed, 1);
  const auto m = compute_cycle_metrics(b.trace);
  ASSERT_EQ(m.size(), 1u);
  EXPECT_FALSE(m[0].succeeded);
  EXPECT_FALSE(m[0].handover_time);
  EXPECT_EQ(m[0].grasp_attempts, 1);

  TraceBuilder premature;
  premature.robot_to(1.0, RobotFsmState::Idle);
  premature.release(2.0, 1, false);
  premature.end(2.0, EpisodeOutcome::Failed, FailureReason::PrematureRelease, 1);
  const auto pm = compute_cycle_metrics(premature.trace);
  ASSERT_EQ(pm.size(), 1u);
  EXPECT_FALSE(pm[0].succeeded);
}

TEST(CycleMetrics, EmptyTraceHasNoCycles) {
  EXPECT_TRUE(compute_cycle_metrics(EpisodeTrace{}).empty());
}

TEST(CycleMetrics, OracleTraceCycles) {
  const auto trace = run_episode(oracle_config(12));
  ASSERT_EQ(trace.outcome, EpisodeOutcome::FullSuccess);
  const auto m = compute_cycle_metrics(trace);
  ASSERT_EQ(m.size(), 4u);
  for (const auto& c : m) {
    EXPECT_TRUE(c.succeeded);
    EXPECT_EQ(c.handover_attempts, 1);
    EXPECT_EQ(c.grasp_attempts, 1);
    // Two consecutive detections on the closure frame and the next one.
    ASSERT_TRUE(c.handover_time);
    EXPECT_NEAR(*c.handover_time, 0.1, 1e-9);
    for (double r : {c.h_idle, c.r_idle, c.c_act}) {
      EXPECT_GE(r, 0.0);
      EXPECT_LE(r, 1.0);
    }
    EXPECT_GT(c.cycle_time, 0.0);
  }
}

TEST(SuccessRates, TableExamples) {
  EXPECT_DOUBLE_EQ((Rate{48, 50}.value().value()), 0.96);
  const Rate handover{46, 54};
  EXPECT_EQ(handover.failures(), 8);
  EXPECT_LT(std::abs(*handover.value() - 0.851), 0.002);
  EXPECT_EQ(format_percent(handover.value()), "85.2%");
  EXPECT_DOUBLE_EQ(*(Rate{45, 50}.value()), 0.90);
  EXPECT_EQ(format_percent(Rate{45, 50}.value()), "90.0%");
}

TEST(SuccessRates, ZeroDenominatorsAreUndefined) {
  EXPECT_FALSE(Rate{}.value().has_value());
  EXPECT_EQ(format_percent(Rate{}.value()), "n/a");
  EXPECT_THROW(success_rates({}), ValidationError);

  EpisodeConfig cfg = oracle_config(2);
  cfg.episode_timeout = 0.5;
  const auto rates = success_rates({run_episode(cfg)});
  EXPECT_FALSE(rates.grasp.value().has_value());
  EXPECT_FALSE(rates.handover.value().has_value());
  EXPECT_EQ(rates.full.total, 1);
  EXPECT_EQ(*rates.full.value(), 0.0);
}

TEST(SuccessRates, OracleIsPerfect) {
  std::vector<EpisodeTrace> traces;
  for (std::uint64_t s = 0; s < 5; ++s) {
    traces.push_back(run_episode(oracle_config(s)));
  }
  const auto r = success_rates(traces);
  EXPECT_EQ(r.grasp.successes, 20);
  EXPECT_EQ(r.grasp.total, 20);
  EXPECT_EQ(r.handover.total, 20);
  EXPECT_EQ(r.cycle.total, 20);
  EXPECT_EQ(*r.full.value(), 1.0);
}

TEST(MetricsCsv, RoundTrip) {
  EpisodeConfig cfg;
  cfg.seed = 31;
  auto rows = metrics_rows(run_episode(cfg, {4, 0, 9}));
  ASSERT_FALSE(rows.empty());
  rows.push_back(rows.front());
  rows.back().metrics.handover_time.reset();
  rows.back().mode = HandoverMode::VoiceCommand;
  std::stringstream ss;
  write_metrics_csv(ss, rows);
  const auto back = read_metrics_csv(ss);
  ASSERT_EQ(back.size(), rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(back[i].participant, 4);
    EXPECT_EQ(back[i].episode, 9);
    EXPECT_EQ(back[i].mode, rows[i].mode);
    EXPECT_EQ(back[i].metrics.cycle_index, rows[i].metrics.cycle_index);
    EXPECT_EQ(back[i].metrics.succeeded, rows[i].metrics.succeeded);
    EXPECT_EQ(back[i].metrics.handover_time.has_value(), rows[i].metrics.handover_time.has_value());
    EXPECT_NEAR(back[i].metrics.cycle_time, rows[i].metrics.cycle_time, 1e-6);
    EXPECT_NEAR(back[i].metrics.c_act, rows[i].metrics.c_act, 1e-8);
  }
}

TEST(MetricsCsv, MalformedInput) {
  auto reads = [](const std::string& s) {
    std::istringstream in(s);
    return read_metrics_csv(in);
  };
  const std::string header =
      "participant,mode,episode,cycle_index,handover_time_s,cycle_time_s,h_idle,r_idle,c_act,"
      "succeeded\n";
  EXPECT_THROW(reads(""), ValidationError);
  EXPECT_THROW(reads("a,b\n"), ValidationError);
  EXPECT_THROW(reads(header + "1,vision,0,1,0.5,10\n"), ValidationError);
  EXPECT_THROW(reads(header + "1,walk,0,1,0.5,10,0,0,0,true\n"), ValidationError);
  EXPECT_THROW(reads(header + "1,vision,0,1,x,10,0,0,0,true\n"), ValidationError);
  EXPECT_THROW(reads(header + "1,vision,0,1,0.5,10,0,0,0,yes\n"), ValidationError);
  EXPECT_EQ(reads(header + "1,vision,0,1,,10,0,0,0,false\n").size(), 1u);
}
