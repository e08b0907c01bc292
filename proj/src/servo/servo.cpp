#include "hrc/servo/servo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "hrc/core/errors.hpp"

namespace hrc::servo {

void ServoConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) {
      throw ValidationError(std::string("servo config: ") + what);
    }
  };
  require(grid_rows >= 1 && grid_cols >= 1, "grid dimensions must be >= 1");
  require(gain > 0.0, "gain must be > 0");
  require(max_speed > 0.0, "max_speed must be > 0");
  require(terminate_threshold > 0.0, "terminate_threshold must be > 0");
  require(descend_depth > 0.0, "descend_depth must be > 0");
  require(hover_height >= 0.0, "hover_height must be >= 0");
  require(noise.value_sd >= 0.0 && noise.control_sd >= 0.0, "noise sd must be >= 0");
  require(align_tolerance >= 0.0, "align_tolerance must be >= 0");
  require(grasp_success_probability >= 0.0 && grasp_success_probability <= 1.0,
          "grasp_success_probability must be in [0, 1]");
  require(knock_sd >= 0.0, "knock_sd must be >= 0");
  require(tick_rate > 0, "tick_rate must be > 0");
  require(gain / tick_rate < 1.0, "gain / tick_rate must be < 1 for a contracting discrete loop");
}

double ground_truth_lyapunov(const Vec3& ee, const Vec3& pregrasp) noexcept {
  return (ee - pregrasp).squaredNorm();
}

Vec3 pregrasp_pose(const Part& part, const ServoConfig& cfg) noexcept {
  return part.position + Vec3(0.0, 0.0, cfg.hover_height);
}

Vec3 lyapunov_control(const Vec3& ee, const Vec3& pregrasp, const ServoConfig& cfg) noexcept {
  Vec3 u = -cfg.gain * (ee - pregrasp);
  const double speed = u.norm();
  if (speed > cfg.max_speed) {
    u *= cfg.max_speed / speed;
  }
  return u;
}

LyapunovGrid render_lyapunov_grid(const Scene& scene, const ServoConfig& cfg, Rng& rng) {
  LyapunovGrid grid;
  grid.rows = cfg.grid_rows;
  grid.cols = cfg.grid_cols;
  grid.cells.resize(static_cast<std::size_t>(grid.rows * grid.cols));

  const Box& ws = scene.workspace;
  const double cell_w = (ws.max.x() - ws.min.x()) / grid.cols;
  const double cell_h = (ws.max.y() - ws.min.y()) / grid.rows;
  const double r2 = scene.part_radius * scene.part_radius;

  for (int r = 0; r < grid.rows; ++r) {
    const double y0 = ws.min.y() + r * cell_h;
    for (int c = 0; c < grid.cols; ++c) {
      const double x0 = ws.min.x() + c * cell_w;
      const double cx = x0 + 0.5 * cell_w;
      const double cy = y0 + 0.5 * cell_h;

      const Part* owner = nullptr;
      double owner_d2 = std::numeric_limits<double>::infinity();
      for (const auto& part : scene.parts) {
        if (part.attached) {
          continue;
        }
        // Disc / rectangle overlap: distance from the disc centre to the nearest cell point.
        const double nx = std::clamp(part.position.x(), x0, x0 + cell_w);
        const double ny = std::clamp(part.position.y(), y0, y0 + cell_h);
        const double dx = part.position.x() - nx;
        const double dy = part.position.y() - ny;
        if (dx * dx + dy * dy > r2) {
          continue;
        }
        const double d2 = (part.position.x() - cx) * (part.position.x() - cx) +
                          (part.position.y() - cy) * (part.position.y() - cy);
        if (d2 < owner_d2) {
          owner = &part;
          owner_d2 = d2;
        }
      }

      auto& cell = grid.cells[static_cast<std::size_t>(r * grid.cols + c)];
      if (owner == nullptr) {
        continue;
      }
      const Vec3 target = pregrasp_pose(*owner, cfg);
      cell.valid = true;
      cell.instance_id = owner->id;
      cell.value = ground_truth_lyapunov(scene.ee, target);
      cell.control = lyapunov_control(scene.ee, target, cfg);
      if (cfg.noise.value_sd > 0.0) {
        cell.value = std::max(0.0, cell.value + rng.normal(0.0, cfg.noise.value_sd));
      }
      if (cfg.noise.control_sd > 0.0) {
        for (int k = 0; k < 3; ++k) {
          cell.control[k] += rng.normal(0.0, cfg.noise.control_sd);
        }
      }
    }
  }
  return grid;
}

std::optional<ControlSelection> select_control(const LyapunovGrid& grid) noexcept {
  std::optional<ControlSelection> best;
  for (std::size_t i = 0; i < grid.cells.size(); ++i) {
    const auto& cell = grid.cells[i];
    if (!cell.valid) {
      continue;
    }
    if (!best || cell.value < best->v_min) {
      best = ControlSelection{i, cell.control, cell.value, cell.instance_id};
    }
  }
  return best;
}

ServoTickResult servo_tick(const Scene& scene, const ServoConfig& cfg, Rng& rng,
                           LyapunovGrid* grid_out) {
  LyapunovGrid grid = render_lyapunov_grid(scene, cfg, rng);
  ServoTickResult out;
  out.selection = select_control(grid);
  if (out.selection) {
    out.control = out.selection->control;
    out.terminate = out.selection->v_min < cfg.terminate_threshold;
  } else {
    out.assembly_done = scene.unattached_count() == 0;
  }
  if (grid_out != nullptr) {
    *grid_out = std::move(grid);
  }
  return out;
}

GraspResult execute_grasp(const Scene& scene, const ServoConfig& cfg, Rng& rng) {
  if (scene.holding) {
    throw ContractViolation("execute_grasp: gripper already holding part " +
                            std::to_string(*scene.holding));
  }
  const Part* target = nullptr;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& part : scene.parts) {
    if (part.attached) {
      continue;
    }
    const double d = planar_distance(scene.ee, part.position);
    if (d < best) {
      best = d;
      target = &part;
    }
  }
  if (target == nullptr) {
    throw ContractViolation("execute_grasp: no part left on the table");
  }

  GraspResult out;
  out.scene = scene;
  out.part_id = target->id;
  out.align_error = best;
  out.scene.ee.z() -= cfg.descend_depth;

  const bool aligned = best <= cfg.align_tolerance;
  // Always draw so the stream position does not depend on alignment.
  const bool mech_ok = rng.bernoulli(cfg.grasp_success_probability);
  out.success = aligned && mech_ok;

  Part& part = *out.scene.find_part(target->id);
  if (out.success) {
    part.attached = true;
    out.scene.holding = part.id;
  } else {
    Vec3 knocked = part.position;
    knocked.x() += rng.normal(0.0, cfg.knock_sd);
    knocked.y() += rng.normal(0.0, cfg.knock_sd);
    part.position = out.scene.workspace.clamp(knocked);
    part.orientation = std::remainder(part.orientation + rng.normal(0.0, 0.2),
                                      2.0 * std::numbers::pi);
  }
  return out;
}

namespace {

// Green (low V) through yellow to red (high V) on a log scale between tau and 1 m^2.
std::string colour_code(double value) {
  const double lo = std::log10(1e-4);
  const double hi = 0.0;
  double t = (std::log10(std::max(value, 1e-12)) - lo) / (hi - lo);
  t = std::clamp(t, 0.0, 1.0);
  const int red = static_cast<int>(std::lround(255.0 * std::min(1.0, 2.0 * t)));
  const int green = static_cast<int>(std::lround(255.0 * std::min(1.0, 2.0 * (1.0 - t))));
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x00", red, green);
  return buf;
}

}  // namespace

nlohmann::json grid_to_json(const LyapunovGrid& grid, SimTime time) {
  using nlohmann::json;
  json cells = json::array();
  for (std::size_t i = 0; i < grid.cells.size(); ++i) {
    const auto& c = grid.cells[i];
    if (!c.valid) {
      continue;
    }
    cells.push_back({{"index", i},
                     {"instance", c.instance_id},
                     {"value", c.value},
                     {"control", {c.control.x(), c.control.y(), c.control.z()}},
                     {"colour", colour_code(c.value)}});
  }
  return {{"t_us", time.us()}, {"rows", grid.rows}, {"cols", grid.cols}, {"valid_cells", cells}};
}

}  // namespace hrc::servo
