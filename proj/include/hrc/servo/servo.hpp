#pragma once

#include <cstddef>
#include <nlohmann/json.hpp>
#include <optional>
#include <vector>

#include "hrc/core/rng.hpp"
#include "hrc/core/scene.hpp"
#include "hrc/core/time.hpp"

namespace hrc::servo {

struct ServoNoise {
  double value_sd = 2e-5;    ///< m^2
  double control_sd = 0.005;  ///< m/s, per component
};

struct ServoConfig {
  int grid_rows = 16;
  int grid_cols = 16;
  double gain = 2.0;                  ///< k, 1/s
  double max_speed = 0.25;            ///< m/s
  double terminate_threshold = 1e-4;  ///< tau, m^2
  double descend_depth = 0.03;        ///< m
  double hover_height = 0.03;         ///< pre-grasp height above the part centre, m
  ServoNoise noise;
  double align_tolerance = 0.012;           ///< planar, m
  double grasp_success_probability = 0.96;  ///< mechanical success once aligned
  double knock_sd = 0.01;                   ///< planar displacement of a part after a miss, m
  int tick_rate = 30;                       ///< Hz

  /// Throws ValidationError.
  void validate() const;
};

struct GridCell {
  bool valid = false;
  double value = 0.0;
  Vec3 control{0.0, 0.0, 0.0};
  int instance_id = -1;
};

/// Per-cell regressed Lyapunov value and control candidate over the workspace image plane.
/// Cell (r, c) covers x in column c and y in row r; index = r * cols + c.
struct LyapunovGrid {
  int rows = 0;
  int cols = 0;
  std::vector<GridCell> cells;

  const GridCell& at(int r, int c) const { return cells[static_cast<std::size_t>(r * cols + c)]; }
};

/// Squared Euclidean distance to the pre-grasp pose.
double ground_truth_lyapunov(const Vec3& ee, const Vec3& pregrasp) noexcept;

Vec3 pregrasp_pose(const Part& part, const ServoConfig& cfg) noexcept;

/// u = -k (ee - pregrasp), clamped to max_speed.
Vec3 lyapunov_control(const Vec3& ee, const Vec3& pregrasp, const ServoConfig& cfg) noexcept;

LyapunovGrid render_lyapunov_grid(const Scene& scene, const ServoConfig& cfg, Rng& rng);

struct ControlSelection {
  std::size_t cell_index = 0;
  Vec3 control{0.0, 0.0, 0.0};
  double v_min = 0.0;
  int instance_id = -1;
};

/// Minimum-value suppression: the valid cell with the smallest value, lowest index on ties.
std::optional<ControlSelection> select_control(const LyapunovGrid& grid) noexcept;

struct ServoTickResult {
  Vec3 control{0.0, 0.0, 0.0};
  bool terminate = false;
  bool assembly_done = false;  ///< no valid cells and nothing left on the table
  std::optional<ControlSelection> selection;
};

ServoTickResult servo_tick(const Scene& scene, const ServoConfig& cfg, Rng& rng,
                           LyapunovGrid* grid_out = nullptr);

struct GraspResult {
  bool success = false;
  Scene scene;
  int part_id = -1;
  double align_error = 0.0;
};

/// Descend, close, and either hold the part or knock it. Gripper must be Open and a
/// part must remain on the table; otherwise throws ContractViolation.
GraspResult execute_grasp(const Scene& scene, const ServoConfig& cfg, Rng& rng);

/// One JSON-lines record for the grid dump, with a per-cell colour code.
nlohmann::json grid_to_json(const LyapunovGrid& grid, SimTime time);

}  // namespace hrc::servo
