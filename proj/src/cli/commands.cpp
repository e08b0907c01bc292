#include "hrc/cli/commands.hpp"

#include <CLI11.hpp>
#include <fnmatch.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <nlohmann/json.hpp>
#include <ostream>

#include "hrc/core/errors.hpp"
#include "hrc/engine/config_json.hpp"
#include "hrc/engine/engine.hpp"
#include "hrc/engine/trace_io.hpp"
#include "hrc/eval/calibration.hpp"
#include "hrc/eval/metrics.hpp"
#include "hrc/eval/stats.hpp"
#include "hrc/percept/percept.hpp"

namespace hrc::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

/// Raised for I/O and other runtime problems (exit 1).
struct RuntimeFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Experiment {
  int repetitions = 1;
  int participants = 1;
  std::optional<std::uint64_t> seed_base;
  std::vector<HandoverMode> modes;
  bool paired = false;
  std::string out_dir;
};

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("--config", "cannot read '" + path + "'");
  }
  json doc = json::parse(in, nullptr, false);
  if (doc.is_discarded()) {
    throw ConfigError("--config", "'" + path + "' is not valid JSON");
  }
  return doc;
}

json load_document(const std::string& config_path, const std::vector<std::string>& sets) {
  json doc = config_path.empty() ? json::object() : read_json_file(config_path);
  for (const auto& s : sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ConfigError("--set", "expected key=value, got '" + s + "'");
    }
    engine::apply_override(doc, std::string_view(s).substr(0, eq),
                           std::string_view(s).substr(eq + 1));
  }
  return doc;
}

Experiment take_experiment(json& doc) {
  Experiment ex;
  if (!doc.is_object() || !doc.contains("experiment")) {
    return ex;
  }
  const json block = doc.at("experiment");
  doc.erase("experiment");
  if (!block.is_object()) {
    throw ConfigError("experiment", "expected an object");
  }
  for (const auto& [key, v] : block.items()) {
    const std::string path = "experiment." + key;
    if (key == "repetitions" || key == "participants") {
      if (!v.is_number_integer()) {
        throw ConfigError(path, "expected an integer");
      }
      (key == "repetitions" ? ex.repetitions : ex.participants) = v.get<int>();
    } else if (key == "seed_base") {
      if (!v.is_number_unsigned()) {
        throw ConfigError(path, "expected a non-negative integer");
      }
      ex.seed_base = v.get<std::uint64_t>();
    } else if (key == "modes") {
      if (!v.is_array()) {
        throw ConfigError(path, "expected an array of mode names");
      }
      for (const auto& m : v) {
        const auto mode = m.is_string() ? parse_mode(m.get<std::string>()) : std::nullopt;
        if (!mode) {
          throw ConfigError(path, "unknown mode " + m.dump());
        }
        ex.modes.push_back(*mode);
      }
    } else if (key == "paired") {
      if (!v.is_boolean()) {
        throw ConfigError(path, "expected a boolean");
      }
      ex.paired = v.get<bool>();
    } else if (key == "out_dir") {
      if (!v.is_string()) {
        throw ConfigError(path, "expected a string");
      }
      ex.out_dir = v.get<std::string>();
    } else {
      throw ConfigError(path, "unknown key");
    }
  }
  return ex;
}

json rate_json(const eval::Rate& r) {
  const auto v = r.value();
  return {{"successes", r.successes},
          {"failures", r.failures()},
          {"total", r.total},
          {"rate", v ? json(*v) : json(nullptr)},
          {"percent", eval::format_percent(v)}};
}

json rates_json(const eval::SuccessRates& s) {
  return {{"grasp", rate_json(s.grasp)},
          {"handover", rate_json(s.handover)},
          {"cycle", rate_json(s.cycle)},
          {"full_assembly", rate_json(s.full)}};
}

void merge(eval::SuccessRates& into, const eval::SuccessRates& from) {
  for (auto [a, b] : {std::pair{&into.grasp, &from.grasp}, {&into.handover, &from.handover},
                      {&into.cycle, &from.cycle}, {&into.full, &from.full}}) {
    a->successes += b->successes;
    a->total += b->total;
  }
}

void print_rates_table(std::ostream& out, const eval::SuccessRates& s) {
  auto frac = [](const eval::Rate& r) {
    return std::to_string(r.failures()) + "/" + std::to_string(r.total);
  };
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-14s %-10s %-10s %-10s %-10s\n", "", "grasp", "handover",
                "cycle", "full");
  out << buf;
  std::snprintf(buf, sizeof buf, "%-14s %-10s %-10s %-10s %-10s\n", "Fails/total",
                frac(s.grasp).c_str(), frac(s.handover).c_str(), frac(s.cycle).c_str(),
                frac(s.full).c_str());
  out << buf;
  std::snprintf(buf, sizeof buf, "%-14s %-10s %-10s %-10s %-10s\n", "Success rate",
                eval::format_percent(s.grasp.value()).c_str(),
                eval::format_percent(s.handover.value()).c_str(),
                eval::format_percent(s.cycle.value()).c_str(),
                eval::format_percent(s.full.value()).c_str());
  out << buf;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  std::string config;
  std::vector<std::string> sets;
  std::optional<int> episodes;
  std::optional<int> participants;
  std::optional<std::uint64_t> seed;
  std::string mode;
  bool paired = false;
  std::string out;
  bool grid_dump = false;
  unsigned threads = 0;
};

int simulate(const SimulateArgs& a, std::ostream& out) {
  json doc = load_document(a.config, a.sets);
  Experiment ex = take_experiment(doc);
  const engine::EpisodeConfig cfg = engine::episode_config_from_json(doc);

  engine::ExperimentPlan plan;
  plan.repetitions = a.episodes.value_or(ex.repetitions);
  plan.participants = a.participants.value_or(ex.participants);
  plan.seed_base = a.seed.value_or(ex.seed_base.value_or(cfg.seed));
  plan.threads = a.threads;
  plan.paired = a.paired || ex.paired;
  if (plan.repetitions < 1) {
    throw ConfigError("experiment.repetitions", "must be >= 1");
  }
  if (plan.participants < 1) {
    throw ConfigError("experiment.participants", "must be >= 1");
  }
  if (plan.paired) {
    plan.modes = {HandoverMode::Vision, HandoverMode::VoiceCommand};
  } else if (!a.mode.empty()) {
    const auto m = parse_mode(a.mode);
    if (!m) {
      throw ConfigError("--mode", "unknown mode '" + a.mode + "'");
    }
    plan.modes = {*m};
  } else if (!ex.modes.empty()) {
    plan.modes = ex.modes;
  } else {
    plan.modes = {cfg.human.mode};
  }
  const std::string out_dir = a.out.empty() ? ex.out_dir : a.out;
  if (out_dir.empty()) {
    throw ConfigError("experiment.out_dir", "an output directory is required (--out)");
  }
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) {
    throw RuntimeFailure("cannot create '" + out_dir + "': " + ec.message());
  }

  const auto jobs = engine::plan_jobs(cfg, plan);
  struct Done {
    std::string file;
    HandoverMode mode;
    eval::SuccessRates rates;
  };
  const auto done = engine::parallel_map(
      jobs.size(),
      [&](std::size_t i) {
        engine::EpisodeHooks hooks;
        std::ofstream grid;
        std::string name;
        if (a.grid_dump) {
          engine::EpisodeTrace probe;
          probe.meta = jobs[i].meta;
          probe.config.human.mode = jobs[i].config.human.mode;
          name = engine::trace_file_name(probe);
          grid.open(fs::path(out_dir) / ("grid_" + name));
          hooks.on_grid = [&](const servo::LyapunovGrid& g, SimTime t) {
            grid << servo::grid_to_json(g, t).dump() << '\n';
          };
        }
        const auto trace = engine::run_episode(jobs[i].config, jobs[i].meta, hooks);
        name = engine::trace_file_name(trace);
        engine::write_trace_file(fs::path(out_dir) / name, trace);
        Done d{name, trace.config.human.mode, {}};
        eval::accumulate(d.rates, trace);
        return d;
      },
      plan.threads);

  eval::SuccessRates all;
  std::map<HandoverMode, eval::SuccessRates> by_mode;
  json files = json::array();
  for (const auto& d : done) {
    merge(all, d.rates);
    merge(by_mode[d.mode], d.rates);
    files.push_back(d.file);
  }
  json modes = json::array();
  for (HandoverMode m : plan.modes) {
    modes.push_back(to_string(m));
  }
  json per_mode = json::object();
  for (const auto& [m, r] : by_mode) {
    per_mode[std::string(to_string(m))] = rates_json(r);
  }
  const json summary = {
      {"schema_version", engine::kSchemaVersion},
      {"config", engine::to_json(cfg)},
      {"experiment",
       {{"repetitions", plan.repetitions},
        {"participants", plan.participants},
        {"seed_base", plan.seed_base},
        {"modes", modes},
        {"paired", plan.paired}}},
      {"episodes", done.size()},
      {"success_rates", rates_json(all)},
      {"by_mode", per_mode},
      {"traces", files},
  };
  std::ofstream sf(fs::path(out_dir) / "summary.json");
  sf << summary.dump(2) << '\n';
  if (!sf) {
    throw RuntimeFailure("cannot write summary.json");
  }
  out << done.size() << " episodes written to " << out_dir << "; full assembly "
      << eval::format_percent(all.full.value()) << '\n';
  return kOk;
}

// ---------------------------------------------------------------- metrics

std::vector<fs::path> expand_inputs(const std::vector<std::string>& inputs) {
  std::vector<fs::path> files;
  for (const auto& in : inputs) {
    const fs::path p(in);
    if (fs::is_directory(p)) {
      for (const auto& e : fs::directory_iterator(p)) {
        if (e.is_regular_file() && e.path().extension() == ".jsonl" &&
            e.path().filename().string().rfind("grid_", 0) != 0) {
          files.push_back(e.path());
        }
      }
    } else if (in.find_first_of("*?[") != std::string::npos) {
      const fs::path dir = p.has_parent_path() ? p.parent_path() : fs::path(".");
      const std::string pattern = p.filename().string();
      if (fs::is_directory(dir)) {
        for (const auto& e : fs::directory_iterator(dir)) {
          if (e.is_regular_file() &&
              fnmatch(pattern.c_str(), e.path().filename().c_str(), 0) == 0) {
            files.push_back(e.path());
          }
        }
      }
    } else {
      files.push_back(p);
    }
  }
  std::sort(files.begin(), files.end());
  files.erase(std::unique(files.begin(), files.end()), files.end());
  return files;
}

int metrics(const std::vector<std::string>& inputs, const std::string& out_path,
            std::ostream& out, std::ostream& err) {
  const auto files = expand_inputs(inputs);
  if (files.empty()) {
    err << "error: no trace files found\n";
    return kRuntimeFailure;
  }
  std::vector<eval::MetricsRow> rows;
  eval::SuccessRates rates;
  int ok = 0;
  for (const auto& f : files) {
    try {
      const auto trace = engine::read_trace_file(f);
      const auto r = eval::metrics_rows(trace);
      rows.insert(rows.end(), r.begin(), r.end());
      eval::accumulate(rates, trace);
      ++ok;
    } catch (const std::exception& e) {
      err << "warning: skipping " << f.string() << ": " << e.what() << '\n';
    }
  }
  if (ok == 0) {
    err << "error: none of the " << files.size() << " trace files could be read\n";
    return kRuntimeFailure;
  }
  if (out_path.empty()) {
    eval::write_metrics_csv(out, rows);
  } else {
    std::ofstream f(out_path);
    eval::write_metrics_csv(f, rows);
    if (!f) {
      throw RuntimeFailure("cannot write '" + out_path + "'");
    }
    out << ok << " traces, " << rows.size() << " cycles\n";
    print_rates_table(out, rates);
  }
  return kOk;
}

// ---------------------------------------------------------------- stats

std::vector<eval::MetricsRow> read_metrics_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw RuntimeFailure("cannot read '" + path + "'");
  }
  return eval::read_metrics_csv(in);
}

using Means = std::map<int, double>;

Means participant_means(const std::vector<eval::MetricsRow>& rows, bool handover,
                        std::optional<HandoverMode> mode) {
  std::map<int, std::pair<double, int>> acc;
  for (const auto& r : rows) {
    if (mode && r.mode != *mode) {
      continue;
    }
    acc.try_emplace(r.participant, 0.0, 0);
    if (!r.metrics.succeeded) {
      continue;
    }
    const std::optional<double> v =
        handover ? r.metrics.handover_time : std::optional<double>(r.metrics.cycle_time);
    if (v) {
      acc[r.participant].first += *v;
      ++acc[r.participant].second;
    }
  }
  Means out;
  for (const auto& [p, s] : acc) {
    out[p] = s.second > 0 ? s.first / s.second : std::nan("");
  }
  return out;
}

json wilcoxon_json(const Means& a, const Means& b) {
  std::vector<std::pair<double, double>> pairs;
  json dropped = json::array();
  double sa = 0.0;
  double sb = 0.0;
  for (const auto& [p, va] : a) {
    const double vb = b.at(p);
    if (std::isnan(va) || std::isnan(vb)) {
      dropped.push_back(p);
      continue;
    }
    pairs.emplace_back(va, vb);
    sa += va;
    sb += vb;
  }
  json j = {{"pairs", pairs.size()}, {"dropped_participants", dropped}};
  if (pairs.empty()) {
    j["defined"] = false;
    return j;
  }
  const auto w = eval::wilcoxon_signed_rank(pairs);
  j["mean_a"] = sa / static_cast<double>(pairs.size());
  j["mean_b"] = sb / static_cast<double>(pairs.size());
  j["w_plus"] = w.w_plus;
  j["n_effective"] = w.n_effective;
  j["method"] = eval::to_string(w.method);
  j["defined"] = w.defined();
  j["p_two_sided"] = w.p_two_sided ? json(*w.p_two_sided) : json(nullptr);
  return j;
}

void require_matched(const Means& a, const Means& b) {
  std::vector<std::string> missing;
  for (const auto& [p, v] : a) {
    if (!b.contains(p)) {
      missing.push_back(std::to_string(p) + " (only in a)");
    }
  }
  for (const auto& [p, v] : b) {
    if (!a.contains(p)) {
      missing.push_back(std::to_string(p) + " (only in b)");
    }
  }
  if (!missing.empty()) {
    std::string msg = "unmatched participant keys:";
    for (const auto& m : missing) {
      msg += " " + m;
    }
    throw ValidationError(msg);
  }
}

json paired_report(const std::vector<eval::MetricsRow>& a, std::optional<HandoverMode> mode_a,
                   const std::vector<eval::MetricsRow>& b, std::optional<HandoverMode> mode_b) {
  json j = json::object();
  for (bool handover : {true, false}) {
    const Means ma = participant_means(a, handover, mode_a);
    const Means mb = participant_means(b, handover, mode_b);
    require_matched(ma, mb);
    j[handover ? "handover_time" : "cycle_time"] = wilcoxon_json(ma, mb);
  }
  return j;
}

json likert_report(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw RuntimeFailure("cannot read '" + path + "'");
  }
  const auto responses = eval::read_likert_csv(in);
  const auto m = eval::score_likert(responses);
  const auto c = eval::cronbach_alpha(m.scores);
  json deleted = json::object();
  json medians = json::object();
  for (std::size_t j = 0; j < m.items.size(); ++j) {
    const std::string name(eval::to_string(m.items[j]));
    deleted[name] = c.alpha_if_deleted[j] ? json(*c.alpha_if_deleted[j]) : json(nullptr);
    std::map<HandoverMode, std::vector<double>> by_mode;
    for (std::size_t i = 0; i < m.rows.size(); ++i) {
      by_mode[m.rows[i].second].push_back(m.scores[i][j]);
    }
    for (auto& [mode, v] : by_mode) {
      std::sort(v.begin(), v.end());
      const std::size_t n = v.size();
      medians[name][std::string(to_string(mode))] =
          n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
    }
  }
  return {{"rows", m.rows.size()},
          {"items", m.items.size()},
          {"cronbach_alpha", c.alpha ? json(*c.alpha) : json(nullptr)},
          {"alpha_if_deleted", deleted},
          {"medians", medians}};
}

int stats(const std::string& a, const std::string& b, const std::string& modes_csv,
          const std::string& likert, const std::string& out_path, std::ostream& out) {
  json report = json::object();
  if (!a.empty() || !b.empty()) {
    if (a.empty() || b.empty()) {
      throw ConfigError("--a/--b", "both metrics files are required for a paired test");
    }
    report["paired"] = paired_report(read_metrics_file(a), std::nullopt, read_metrics_file(b),
                                     std::nullopt);
    report["paired"]["a"] = a;
    report["paired"]["b"] = b;
  }
  if (!modes_csv.empty()) {
    const auto rows = read_metrics_file(modes_csv);
    report["modes"] =
        paired_report(rows, HandoverMode::Vision, rows, HandoverMode::VoiceCommand);
    report["modes"]["a"] = "vision";
    report["modes"]["b"] = "voice_command";
  }
  if (!likert.empty()) {
    report["likert"] = likert_report(likert);
  }
  if (report.empty()) {
    throw ConfigError("stats", "give --a and --b, --modes, or --likert");
  }
  if (out_path.empty()) {
    out << report.dump(2) << '\n';
  } else {
    std::ofstream f(out_path);
    f << report.dump(2) << '\n';
    if (!f) {
      throw RuntimeFailure("cannot write '" + out_path + "'");
    }
  }
  return kOk;
}

// ---------------------------------------------------------------- report

int report(const std::string& config, const std::vector<std::string>& sets, int episodes,
           std::optional<std::uint64_t> seed, const std::string& json_path, std::ostream& out) {
  json doc = load_document(config, sets);
  take_experiment(doc);
  const engine::EpisodeConfig cfg = engine::episode_config_from_json(doc);
  const auto& rc = cfg.recognizer;
  json j = json::object();

  char buf[256];
  out << "Recognizer channel (per frame, table recall, priors from config)\n";
  std::snprintf(buf, sizeof buf, "  %-20s %8s %10s %10s\n", "action", "recall", "precision",
                "reference");
  out << buf;
  const auto m =
      percept::build_confusion_matrix(rc.per_class_recall, {rc.no_assembly_fraction}, rc.priors);
  const auto prec = percept::precision_under_priors(m, rc.priors);
  const auto ref = percept::reference_precision();
  for (AtomicAction act : kAllActions) {
    const auto i = index_of(act);
    std::snprintf(buf, sizeof buf, "  %-20s %8.3f %10.3f %10.3f\n",
                  std::string(to_string(act)).c_str(), rc.per_class_recall[i], prec[i], ref[i]);
    out << buf;
    j["precision"][std::string(to_string(act))] = {
        {"recall", rc.per_class_recall[i]}, {"precision", prec[i]}, {"reference", ref[i]}};
  }

  const double handover_recall = rc.effective_recall()[index_of(AtomicAction::HumanGrasp)];
  const int window = static_cast<int>(std::lround(cfg.human.retry_timeout * rc.frame_rate));
  const auto wait = eval::detection_wait(handover_recall, cfg.fsm.required_consecutive, window);
  const double vision_mean = wait.mean_frames / rc.frame_rate;
  const double voice_mean = cfg.human.voice_delay.median *
                            std::exp(0.5 * cfg.human.voice_delay.dispersion *
                                     cfg.human.voice_delay.dispersion);
  const double grasp_p = cfg.servo.grasp_success_probability;
  const double cycle =
      eval::analytic_cycle_rate(grasp_p, wait.probability, cfg.human.retry_probability);
  std::snprintf(buf, sizeof buf,
                "\nHandover detection: recall %.4f, %d consecutive within %d frames -> %.4f\n"
                "  vision mean handover %.3f s, voice mean %.3f s, gap %.3f s\n"
                "Analytic cycle rate g[h+(1-h)p h] = %.4f; over %d legs %.4f\n",
                handover_recall, cfg.fsm.required_consecutive, window, wait.probability,
                vision_mean, voice_mean, voice_mean - vision_mean, cycle, cfg.legs,
                eval::repetition_decay(cycle, cfg.legs));
  out << buf;
  j["handover"] = {{"recall", handover_recall},
                   {"window_frames", window},
                   {"probability", wait.probability},
                   {"vision_mean_s", vision_mean},
                   {"voice_mean_s", voice_mean}};
  j["analytic"] = {{"cycle", cycle}, {"full", eval::repetition_decay(cycle, cfg.legs)}};

  if (episodes > 0) {
    engine::ExperimentPlan plan;
    plan.repetitions = episodes;
    plan.seed_base = seed.value_or(cfg.seed);
    plan.modes = {cfg.human.mode};
    const auto jobs = engine::plan_jobs(cfg, plan);
    const auto rates = engine::parallel_map(jobs.size(), [&](std::size_t i) {
      eval::SuccessRates r;
      eval::accumulate(r, engine::run_episode(jobs[i].config, jobs[i].meta));
      return r;
    });
    eval::SuccessRates all;
    for (const auto& r : rates) {
      merge(all, r);
    }
    out << "\nSimulated success (" << episodes << " episodes, seed base " << plan.seed_base
        << ")\n";
    print_rates_table(out, all);
    j["simulated"] = rates_json(all);
  }
  if (!json_path.empty()) {
    std::ofstream f(json_path);
    f << j.dump(2) << '\n';
    if (!f) {
      throw RuntimeFailure("cannot write '" + json_path + "'");
    }
  }
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Discrete-event simulator of a vision-guided human-robot assembly cell"};
  app.set_version_flag("--version", std::string("hrcsim ") + std::string(kToolVersion) +
                                        " (trace schema " +
                                        std::to_string(engine::kSchemaVersion) + ")");
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* s = app.add_subcommand("simulate", "Run episodes and write JSONL traces + summary.json");
  s->add_option("--config", sim.config, "JSON config file");
  s->add_option("--set", sim.sets, "Override a config key: dotted.key=value")->take_all();
  s->add_option("--episodes", sim.episodes, "Repetitions per participant and mode");
  s->add_option("--participants", sim.participants, "Number of participants");
  s->add_option("--seed", sim.seed, "Seed base; episode i uses seed base + i");
  s->add_option("--mode", sim.mode, "vision or voice");
  s->add_flag("--paired", sim.paired, "Run vision and voice with shared human draws");
  s->add_option("--out", sim.out, "Output directory");
  s->add_flag("--grid-dump", sim.grid_dump, "Also write the servo grids per episode");
  s->add_option("--threads", sim.threads, "Worker threads (0 = all cores)");

  std::vector<std::string> metric_inputs;
  std::string metrics_out;
  auto* m = app.add_subcommand("metrics", "Per-cycle metrics CSV from trace files");
  m->add_option("traces", metric_inputs, "Trace files, directories or glob patterns")
      ->required();
  m->add_option("--out", metrics_out, "CSV path (default stdout)");

  std::string st_a;
  std::string st_b;
  std::string st_modes;
  std::string st_likert;
  std::string st_out;
  auto* t = app.add_subcommand("stats", "Wilcoxon and questionnaire statistics as JSON");
  t->add_option("--a", st_a, "Metrics CSV for condition a");
  t->add_option("--b", st_b, "Metrics CSV for condition b");
  t->add_option("--modes", st_modes, "One metrics CSV; pair vision against voice_command");
  t->add_option("--likert", st_likert, "Questionnaire CSV (participant,mode,item,rating)");
  t->add_option("--out", st_out, "JSON path (default stdout)");

  std::string rp_config;
  std::vector<std::string> rp_sets;
  int rp_episodes = 200;
  std::optional<std::uint64_t> rp_seed;
  std::string rp_json;
  auto* r = app.add_subcommand("report", "Calibration checks and a simulated success table");
  r->add_option("--config", rp_config, "JSON config file");
  r->add_option("--set", rp_sets, "Override a config key: dotted.key=value")->take_all();
  r->add_option("--episodes", rp_episodes, "Episodes to simulate (0 to skip)");
  r->add_option("--seed", rp_seed, "Seed base");
  r->add_option("--json", rp_json, "Also write the report as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (s->parsed()) {
      return simulate(sim, out);
    }
    if (m->parsed()) {
      return metrics(metric_inputs, metrics_out, out, err);
    }
    if (t->parsed()) {
      return stats(st_a, st_b, st_modes, st_likert, st_out, out);
    }
    if (r->parsed()) {
      return report(rp_config, rp_sets, rp_episodes, rp_seed, rp_json, out);
    }
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntimeFailure;
  }
  return kOk;
}

}  // namespace hrc::cli
