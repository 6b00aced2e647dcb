#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "acrnn/geometry.hpp"

namespace acrnn {

struct Joint {
  std::string name;
  std::optional<std::size_t> parent;  // empty only for the root
  Vec3 offset;                        // meters, relative to parent in neutral pose
};

// Topologically ordered joint tree: parent index of joint i is < i.
struct Skeleton {
  std::vector<Joint> joints;
  std::size_t root_index = 0;
  double height_m = 0.0;

  std::size_t joint_count() const { return joints.size(); }

  // Throws ContractError when an invariant is broken.
  void validate() const;

  // World position of every joint with all channels at zero.
  std::vector<Vec3> neutral_pose() const;

  // Vertical extent of the neutral pose.
  double neutral_height() const;
};

// One pose: absolute world position per joint, meters.
using Pose = std::vector<Vec3>;

struct MotionClip {
  std::shared_ptr<const Skeleton> skeleton;
  double fps = 0.0;
  std::vector<Pose> frames;
  std::string id;  // provenance, e.g. source file name

  std::size_t frame_count() const { return frames.size(); }
  std::size_t joint_count() const { return skeleton ? skeleton->joint_count() : 0; }

  void validate() const;
};

}  // namespace acrnn
