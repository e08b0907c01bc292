#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

#include "hrc/core/events.hpp"
#include "hrc/engine/config.hpp"
#include "hrc/servo/servo.hpp"

namespace hrc::engine {

struct EpisodeMeta {
  int participant = 0;
  int repetition = 0;
  int episode_index = 0;
};

struct EpisodeTrace {
  EpisodeConfig config;
  EpisodeMeta meta;
  std::vector<SimEvent> events;
  EpisodeOutcome outcome = EpisodeOutcome::Failed;
  FailureReason reason = FailureReason::None;
  int at_cycle = 0;
  std::vector<SimTime> cycle_boundaries;  ///< Release times
};

struct EpisodeHooks {
  /// Called with every rendered servo grid.
  std::function<void(const servo::LyapunovGrid&, SimTime)> on_grid;
};

/// Validates `cfg`, then runs one episode to completion, failure or timeout.
EpisodeTrace run_episode(const EpisodeConfig& cfg, const EpisodeMeta& meta = {},
                         const EpisodeHooks& hooks = {});

/// Initial storage-table layout for a seed: `legs` parts, pairwise separated.
Scene initial_scene(const EpisodeConfig& cfg);

struct ExperimentPlan {
  int participants = 1;
  int repetitions = 1;
  std::uint64_t seed_base = 0;
  /// Each mode is run for every (participant, repetition). With several modes and
  /// `paired`, the modes share a seed so the human draws are common.
  std::vector<HandoverMode> modes{HandoverMode::Vision};
  bool paired = true;
  unsigned threads = 0;  ///< 0 == hardware concurrency
};

struct EpisodeJob {
  EpisodeConfig config;
  EpisodeMeta meta;
};

/// Expands a plan into jobs. Seeds are seed_base + i with i the
/// (participant, repetition) index, shifted per mode when not paired.
std::vector<EpisodeJob> plan_jobs(const EpisodeConfig& base, const ExperimentPlan& plan);

struct ExperimentResults {
  std::vector<EpisodeTrace> traces;  ///< in job order
};

ExperimentResults run_experiment(const EpisodeConfig& base, const ExperimentPlan& plan);

/// Calls fn(i) for i in [0, n) on a pool of threads and returns the results in index order.
/// The first exception thrown by any call is rethrown after the pool drains.
template <typename F>
auto parallel_map(std::size_t n, F fn, unsigned threads = 0)
    -> std::vector<decltype(fn(std::size_t{}))> {
  using R = decltype(fn(std::size_t{}));
  std::vector<std::optional<R>> slots(n);
  if (threads == 0) {
    threads = std::max(1u, std::thread::hardware_concurrency());
  }
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));

  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        slots[i].emplace(fn(i));
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) {
          error = std::current_exception();
        }
        next = n;
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) {
    pool.emplace_back(worker);
  }
  worker();
  for (auto& th : pool) {
    th.join();
  }
  if (error) {
    std::rethrow_exception(error);
  }
  std::vector<R> out;
  out.reserve(n);
  for (auto& s : slots) {
    out.push_back(std::move(*s));
  }
  return out;
}

}  // namespace hrc::engine
