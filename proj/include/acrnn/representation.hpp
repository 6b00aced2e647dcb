#pragma once

#include <vector>

#include "acrnn/skeleton.hpp"

namespace acrnn {

// Network-facing pose vector: root displacement from the previous frame plus
// every other joint's offset from the root, all in world coordinates, meters.
// Flattened dimension D = 3 * J: [disp.xyz, offset_1.xyz, ..., offset_{J-1}.xyz]
// with non-root joints in skeleton order.
struct RepresentationFrame {
  Vec3 root_displacement;
  std::vector<Vec3> relative_offsets;

  std::size_t dim() const { return 3 * (relative_offsets.size() + 1); }

  std::vector<double> flatten() const;
  static RepresentationFrame unflatten(const std::vector<double>& values);
};

using RepSequence = std::vector<RepresentationFrame>;

// One frame shorter than the clip: the first frame has no displacement.
RepSequence to_representation(const MotionClip& clip);

// Inverse. Produces rep.size() + 1 frames; frame 0 sits at initial_root and
// borrows the first frame's offsets, frame i >= 1 applies rep[i-1].
MotionClip from_representation(const RepSequence& rep, const Vec3& initial_root,
                               std::shared_ptr<const Skeleton> skeleton, double fps);

// Yaw rotation of every 3-vector in the sequence (see rotate_y for the
// convention). Norms and inter-joint distances are preserved.
RepSequence augment_rotate(const RepSequence& rep, double angle_rad);

// Keeps frames 0, stride, 2*stride, ...; fps divides by stride.
MotionClip subsample(const MotionClip& clip, std::size_t stride);

// Flatten a whole sequence into row-major [frames x D] values.
std::vector<double> flatten_sequence(const RepSequence& rep);

}  // namespace acrnn
