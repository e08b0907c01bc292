#pragma once

#include <Eigen/Core>
#include <optional>
#include <vector>

namespace hrc {

using Vec3 = Eigen::Vector3d;

/// Axis-aligned box in metres.
struct Box {
  Vec3 min{0.0, 0.0, 0.0};
  Vec3 max{0.0, 0.0, 0.0};

  bool contains(const Vec3& p) const noexcept;
  Vec3 clamp(const Vec3& p) const noexcept;
};

struct Part {
  int id = 0;
  Vec3 position{0.0, 0.0, 0.0};  ///< centre of the part, metres
  double orientation = 0.0;      ///< planar yaw, radians
  bool attached = false;         ///< off the storage table (held by the robot or assembled)
};

/// Planar tabletop scene seen by the servoing camera. The end-effector is a point.
struct Scene {
  std::vector<Part> parts;
  Vec3 ee{0.0, 0.0, 0.0};
  std::optional<int> holding;  ///< gripper: nullopt == Open, otherwise Holding(part id)
  Box workspace;
  double part_radius = 0.03;  ///< graspable disc radius seen by the segmentation mask

  const Part* find_part(int id) const noexcept;
  Part* find_part(int id) noexcept;
  int unattached_count() const noexcept;

  /// Throws ValidationError if an unattached part is outside the workspace or the
  /// gripper refers to an unknown / unattached part.
  void validate() const;
};

double planar_distance(const Vec3& a, const Vec3& b) noexcept;

}  // namespace hrc
