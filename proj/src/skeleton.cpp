#include "acrnn/skeleton.hpp"

#include <algorithm>

#include "acrnn/errors.hpp"

namespace acrnn {

void Skeleton::validate() const {
  if (joints.empty()) throw ContractError("skeleton: no joints");
  std::size_t parentless = 0;
  for (std::size_t i = 0; i < joints.size(); ++i) {
    const Joint& j = joints[i];
    if (!j.parent) {
      ++parentless;
      if (i != root_index)
        throw ContractError("skeleton: joint " + j.name + " has no parent but is not the root");
    } else if (*j.parent >= i) {
      throw ContractError("skeleton: joint " + j.name + " is not topologically ordered");
    }
  }
  if (parentless != 1) throw ContractError("skeleton: expected exactly one root joint");
  if (!(height_m > 0.0)) throw ContractError("skeleton: height must be positive");
}

std::vector<Vec3> Skeleton::neutral_pose() const {
  std::vector<Vec3> world(joints.size());
  for (std::size_t i = 0; i < joints.size(); ++i) {
    const Joint& j = joints[i];
    world[i] = j.parent ? world[*j.parent] + j.offset : j.offset;
  }
  return world;
}

double Skeleton::neutral_height() const {
  const auto pose = neutral_pose();
  double lo = pose.front().y, hi = pose.front().y;
  for (const Vec3& p : pose) {
    lo = std::min(lo, p.y);
    hi = std::max(hi, p.y);
  }
  return hi - lo;
}

void MotionClip::validate() const {
  if (!skeleton) throw ContractError("clip: missing skeleton");
  if (!(fps > 0.0)) throw ContractError("clip: fps must be positive");
  const std::size_t j = skeleton->joint_count();
  for (std::size_t f = 0; f < frames.size(); ++f) {
    if (frames[f].size() != j)
      throw ContractError("clip: frame " + std::to_string(f) + " has " +
                          std::to_string(frames[f].size()) + " joints, skeleton has " +
                          std::to_string(j));
    for (const Vec3& p : frames[f])
      if (!p.finite()) throw NonFiniteError("clip: non-finite position in frame " + std::to_string(f));
  }
}

}  // namespace acrnn
