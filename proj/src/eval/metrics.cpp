#include "hrc/eval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "hrc/core/errors.hpp"

namespace hrc::eval {
namespace {

struct Segment {
  std::int64_t start_us = 0;
  RobotFsmState robot = RobotFsmState::Home;
  AtomicAction human = AtomicAction::NoAssemblyAction;
};

std::vector<Segment> timeline(const engine::EpisodeTrace& trace) {
  std::vector<Segment> segs{{0, RobotFsmState::Home, AtomicAction::NoAssemblyAction}};
  for (const auto& e : trace.events) {
    Segment next = segs.back();
    if (const auto* f = e.as<FsmTransitionEvent>()) {
      next.robot = f->to;
    } else if (const auto* h = e.as<TrueHumanActionEvent>()) {
      next.human = h->action;
    } else {
      continue;
    }
    next.start_us = e.time.us();
    if (next.start_us == segs.back().start_us) {
      segs.back() = next;
    } else {
      segs.push_back(next);
    }
  }
  return segs;
}

struct Durations {
  double h_idle = 0.0;
  double r_idle = 0.0;
  double c_act = 0.0;
};

Durations integrate(const std::vector<Segment>& segs, std::int64_t a, std::int64_t b) {
  Durations d;
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const std::int64_t s = std::max(a, segs[i].start_us);
    const std::int64_t e =
        std::min(b, i + 1 < segs.size() ? segs[i + 1].start_us : INT64_MAX);
    if (e <= s) {
      continue;
    }
    const double len = static_cast<double>(e - s);
    const bool human_idle = segs[i].human == AtomicAction::NoAssemblyAction;
    const RobotFsmState r = segs[i].robot;
    if (human_idle && r != RobotFsmState::Idle) {
      d.h_idle += len;
    }
    if (r == RobotFsmState::Idle) {
      d.r_idle += len;
    }
    if (!human_idle && r != RobotFsmState::Idle && r != RobotFsmState::Finished) {
      d.c_act += len;
    }
  }
  return d;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

}  // namespace

std::vector<CycleMetrics> compute_cycle_metrics(const engine::EpisodeTrace& trace) {
  std::vector<CycleMetrics> out;
  if (trace.events.empty()) {
    return out;
  }
  const auto segs = timeline(trace);
  const std::int64_t end_us = trace.events.back().time.us();

  struct Boundary {
    std::int64_t t;
    bool ok;
  };
  std::vector<Boundary> releases;
  for (const auto& e : trace.events) {
    if (const auto* r = e.as<ReleaseEvent>()) {
      releases.push_back({e.time.us(), r->human_grasping});
    }
  }
  int cycles = static_cast<int>(releases.size());
  if (trace.outcome == EpisodeOutcome::Failed && trace.at_cycle > cycles) {
    ++cycles;
  }

  std::int64_t start = 0;
  for (int c = 1; c <= cycles; ++c) {
    const bool released = c <= static_cast<int>(releases.size());
    const std::int64_t stop = released ? releases[c - 1].t : end_us;
    CycleMetrics m;
    m.cycle_index = c;
    m.succeeded = released && releases[c - 1].ok;
    m.cycle_time = static_cast<double>(stop - start) * 1e-6;

    std::optional<std::int64_t> closure;
    for (const auto& e : trace.events) {
      if (const auto* g = e.as<GraspAttemptEvent>(); g != nullptr && g->cycle == c) {
        ++m.grasp_attempts;
      } else if (const auto* h = e.as<TrueHumanActionEvent>();
                 h != nullptr && h->action == AtomicAction::HumanGrasp && h->cycle == c) {
        ++m.handover_attempts;
        if (e.time.us() <= stop) {
          closure = e.time.us();
        }
      }
    }
    if (m.succeeded && closure) {
      m.handover_time = static_cast<double>(stop - *closure) * 1e-6;
    }
    if (stop > start) {
      const Durations d = integrate(segs, start, stop);
      const double len = static_cast<double>(stop - start);
      m.h_idle = d.h_idle / len;
      m.r_idle = d.r_idle / len;
      m.c_act = d.c_act / len;
    }
    out.push_back(m);
    start = stop;
  }
  return out;
}

void accumulate(SuccessRates& into, const engine::EpisodeTrace& trace) {
  for (const auto& e : trace.events) {
    if (const auto* g = e.as<GraspAttemptEvent>()) {
      ++into.grasp.total;
      into.grasp.successes += g->success ? 1 : 0;
    } else if (const auto* h = e.as<TrueHumanActionEvent>();
               h != nullptr && h->action == AtomicAction::HumanGrasp) {
      ++into.handover.total;
    } else if (const auto* r = e.as<ReleaseEvent>(); r != nullptr && r->human_grasping) {
      ++into.handover.successes;
    }
  }
  for (const auto& m : compute_cycle_metrics(trace)) {
    ++into.cycle.total;
    into.cycle.successes += m.succeeded ? 1 : 0;
  }
  ++into.full.total;
  into.full.successes += trace.outcome == EpisodeOutcome::FullSuccess ? 1 : 0;
}

SuccessRates success_rates(const std::vector<engine::EpisodeTrace>& traces) {
  if (traces.empty()) {
    throw ValidationError("success_rates needs at least one trace");
  }
  SuccessRates out;
  for (const auto& t : traces) {
    accumulate(out, t);
  }
  return out;
}

std::string format_percent(std::optional<double> ratio) {
  if (!ratio) {
    return "n/a";
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f%%", *ratio * 100.0);
  return buf;
}

std::vector<MetricsRow> metrics_rows(const engine::EpisodeTrace& trace) {
  std::vector<MetricsRow> rows;
  for (const auto& m : compute_cycle_metrics(trace)) {
    rows.push_back({trace.meta.participant, trace.config.human.mode, trace.meta.episode_index, m});
  }
  return rows;
}

void write_metrics_csv(std::ostream& out, const std::vector<MetricsRow>& rows) {
  out << "participant,mode,episode,cycle_index,handover_time_s,cycle_time_s,h_idle,r_idle,c_act,"
         "succeeded\n";
  for (const auto& r : rows) {
    const auto& m = r.metrics;
    out << r.participant << ',' << to_string(r.mode) << ',' << r.episode << ',' << m.cycle_index
        << ',' << (m.handover_time ? fmt(*m.handover_time) : "") << ',' << fmt(m.cycle_time)
        << ',' << fmt(m.h_idle) << ',' << fmt(m.r_idle) << ',' << fmt(m.c_act) << ','
        << (m.succeeded ? "true" : "false") << '\n';
  }
}

std::vector<MetricsRow> read_metrics_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) {
    throw ValidationError("metrics CSV is empty");
  }
  if (line.rfind("participant,mode,episode,cycle_index,handover_time_s", 0) != 0) {
    throw ValidationError("metrics CSV header not recognised");
  }
  std::vector<MetricsRow> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.empty()) {
      continue;
    }
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      f.push_back(cell);
    }
    if (line.back() == ',') {
      f.emplace_back();
    }
    const std::string where = "metrics CSV line " + std::to_string(line_no);
    if (f.size() != 10) {
      throw ValidationError(where + ": expected 10 fields");
    }
    try {
      MetricsRow r;
      r.participant = std::stoi(f[0]);
      const auto mode = parse_mode(f[1]);
      if (!mode) {
        throw ValidationError(where + ": unknown mode '" + f[1] + "'");
      }
      r.mode = *mode;
      r.episode = std::stoi(f[2]);
      r.metrics.cycle_index = std::stoi(f[3]);
      if (!f[4].empty()) {
        r.metrics.handover_time = std::stod(f[4]);
      }
      r.metrics.cycle_time = std::stod(f[5]);
      r.metrics.h_idle = std::stod(f[6]);
      r.metrics.r_idle = std::stod(f[7]);
      r.metrics.c_act = std::stod(f[8]);
      if (f[9] != "true" && f[9] != "false") {
        throw ValidationError(where + ": succeeded must be true or false");
      }
      r.metrics.succeeded = f[9] == "true";
      rows.push_back(r);
    } catch (const std::logic_error& e) {
      if (dynamic_cast<const ValidationError*>(&e) != nullptr) {
        throw;
      }
      throw ValidationError(where + ": bad number");
    }
  }
  return rows;
}

}  // namespace hrc::eval
