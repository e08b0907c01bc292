#include "hrc/core/scene.hpp"

#include <algorithm>
#include <string>

#include "hrc/core/errors.hpp"

namespace hrc {

bool Box::contains(const Vec3& p) const noexcept {
  return (p.array() >= min.array()).all() && (p.array() <= max.array()).all();
}

Vec3 Box::clamp(const Vec3& p) const noexcept { return p.cwiseMax(min).cwiseMin(max); }

const Part* Scene::find_part(int id) const noexcept {
  auto it = std::find_if(parts.begin(), parts.end(), [id](const Part& p) { return p.id == id; });
  return it == parts.end() ? nullptr : &*it;
}

Part* Scene::find_part(int id) noexcept {
  auto it = std::find_if(parts.begin(), parts.end(), [id](const Part& p) { return p.id == id; });
  return it == parts.end() ? nullptr : &*it;
}

int Scene::unattached_count() const noexcept {
  return static_cast<int>(
      std::count_if(parts.begin(), parts.end(), [](const Part& p) { return !p.attached; }));
}

void Scene::validate() const {
  for (const auto& p : parts) {
    if (!p.attached && !workspace.contains(p.position)) {
      throw ValidationError("part " + std::to_string(p.id) + " lies outside the workspace");
    }
  }
  if (holding) {
    const Part* held = find_part(*holding);
    if (held == nullptr || !held->attached) {
      throw ValidationError("gripper holds part " + std::to_string(*holding) +
                            " which is not an attached part of the scene");
    }
  }
}

double planar_distance(const Vec3& a, const Vec3& b) noexcept {
  return (a.head<2>() - b.head<2>()).norm();
}

}  // namespace hrc
