#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hrc/engine/engine.hpp"

namespace hrc::eval {

struct CycleMetrics {
  int cycle_index = 0;
  std::optional<double> handover_time;  ///< s, only for a completed handover
  double cycle_time = 0.0;              ///< s
  double h_idle = 0.0;
  double r_idle = 0.0;
  double c_act = 0.0;
  int grasp_attempts = 0;
  int handover_attempts = 0;
  bool succeeded = false;
};

/// Cycle c runs from the previous Release (episode start for the first) to its own Release,
/// or to the episode end if it failed.
///
/// handover_time: Release minus the last hand closure (command issue for voice) in the cycle.
/// h_idle: human in no_assembly_action while the robot is not waiting in Idle.
/// r_idle: robot in Idle.
/// c_act: human action != no_assembly_action while the robot is in neither Idle nor Finished.
/// Ratios are over cycle_time.
std::vector<CycleMetrics> compute_cycle_metrics(const engine::EpisodeTrace& trace);

struct Rate {
  long successes = 0;
  long total = 0;
  std::optional<double> value() const {
    return total > 0 ? std::optional<double>(static_cast<double>(successes) / total)
                     : std::nullopt;
  }
  long failures() const { return total - successes; }
};

struct SuccessRates {
  Rate grasp;     ///< successful grasp attempts / grasp attempts
  Rate handover;  ///< completed handovers / human grasp initiations
  Rate cycle;     ///< succeeded cycles / cycles started
  Rate full;      ///< full-success episodes / episodes
};

SuccessRates success_rates(const std::vector<engine::EpisodeTrace>& traces);
void accumulate(SuccessRates& into, const engine::EpisodeTrace& trace);

/// "85.2%"; "n/a" when undefined.
std::string format_percent(std::optional<double> ratio);

struct MetricsRow {
  int participant = 0;
  HandoverMode mode = HandoverMode::Vision;
  int episode = 0;
  CycleMetrics metrics;
};

std::vector<MetricsRow> metrics_rows(const engine::EpisodeTrace& trace);

/// Header: participant,mode,episode,cycle_index,handover_time_s,cycle_time_s,h_idle,r_idle,
/// c_act,succeeded. An undefined handover time is an empty field.
void write_metrics_csv(std::ostream& out, const std::vector<MetricsRow>& rows);
/// Throws ValidationError naming the line on malformed input.
std::vector<MetricsRow> read_metrics_csv(std::istream& in);

}  // namespace hrc::eval
