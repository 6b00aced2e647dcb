#include "acrnn/representation.hpp"

#include "acrnn/errors.hpp"

namespace acrnn {

std::vector<double> RepresentationFrame::flatten() const {
  std::vector<double> out;
  out.reserve(dim());
  out.push_back(root_displacement.x);
  out.push_back(root_displacement.y);
  out.push_back(root_displacement.z);
  for (const Vec3& o : relative_offsets) {
    out.push_back(o.x);
    out.push_back(o.y);
    out.push_back(o.z);
  }
  return out;
}

RepresentationFrame RepresentationFrame::unflatten(const std::vector<double>& values) {
  if (values.size() < 3 || values.size() % 3 != 0)
    throw ShapeError("representation: flattened length " + std::to_string(values.size()) +
                     " is not a positive multiple of 3");
  RepresentationFrame f;
  f.root_displacement = {values[0], values[1], values[2]};
  f.relative_offsets.reserve(values.size() / 3 - 1);
  for (std::size_t i = 3; i < values.size(); i += 3)
    f.relative_offsets.push_back({values[i], values[i + 1], values[i + 2]});
  return f;
}

RepSequence to_representation(const MotionClip& clip) {
  if (clip.frame_count() < 2)
    throw InsufficientFrames("to_representation: need at least 2 frames, got " +
                             std::to_string(clip.frame_count()));
  const Skeleton& skel = *clip.skeleton;
  const std::size_t root = skel.root_index;
  RepSequence rep;
  rep.reserve(clip.frame_count() - 1);
  for (std::size_t t = 1; t < clip.frame_count(); ++t) {
    const Pose& prev = clip.frames[t - 1];
    const Pose& cur = clip.frames[t];
    RepresentationFrame f;
    f.root_displacement = cur[root] - prev[root];
    f.relative_offsets.reserve(skel.joint_count() - 1);
    for (std::size_t j = 0; j < skel.joint_count(); ++j) {
      if (j == root) continue;
      f.relative_offsets.push_back(cur[j] - cur[root]);
    }
    rep.push_back(std::move(f));
  }
  return rep;
}

MotionClip from_representation(const RepSequence& rep, const Vec3& initial_root,
                               std::shared_ptr<const Skeleton> skeleton, double fps) {
  if (rep.empty()) throw InsufficientFrames("from_representation: empty sequence");
  const Skeleton& skel = *skeleton;
  const std::size_t root = skel.root_index;
  for (const RepresentationFrame& f : rep)
    if (f.relative_offsets.size() + 1 != skel.joint_count())
      throw ShapeError("from_representation: frame has " +
                       std::to_string(f.relative_offsets.size() + 1) + " joints, skeleton has " +
                       std::to_string(skel.joint_count()));

  MotionClip clip;
  clip.skeleton = std::move(skeleton);
  clip.fps = fps;
  clip.frames.reserve(rep.size() + 1);

  auto build_pose = [&](const Vec3& root_pos, const RepresentationFrame& f) {
    Pose pose(skel.joint_count());
    pose[root] = root_pos;
    std::size_t k = 0;
    for (std::size_t j = 0; j < skel.joint_count(); ++j) {
      if (j == root) continue;
      pose[j] = root_pos + f.relative_offsets[k++];
    }
    return pose;
  };

  clip.frames.push_back(build_pose(initial_root, rep.front()));
  Vec3 root_pos = initial_root;
  for (const RepresentationFrame& f : rep) {
    root_pos += f.root_displacement;
    clip.frames.push_back(build_pose(root_pos, f));
  }
  return clip;
}

RepSequence augment_rotate(const RepSequence& rep, double angle_rad) {
  if (!std::isfinite(angle_rad)) throw ContractError("augment_rotate: non-finite angle");
  RepSequence out;
  out.reserve(rep.size());
  for (const RepresentationFrame& f : rep) {
    RepresentationFrame r;
    r.root_displacement = rotate_y(f.root_displacement, angle_rad);
    r.relative_offsets.reserve(f.relative_offsets.size());
    for (const Vec3& o : f.relative_offsets) r.relative_offsets.push_back(rotate_y(o, angle_rad));
    out.push_back(std::move(r));
  }
  return out;
}

MotionClip subsample(const MotionClip& clip, std::size_t stride) {
  if (stride < 1) throw InvalidStride("subsample: stride must be >= 1");
  MotionClip out;
  out.skeleton = clip.skeleton;
  out.fps = clip.fps / static_cast<double>(stride);
  out.id = clip.id;
  out.frames.reserve((clip.frame_count() + stride - 1) / stride);
  for (std::size_t t = 0; t < clip.frame_count(); t += stride) out.frames.push_back(clip.frames[t]);
  return out;
}

std::vector<double> flatten_sequence(const RepSequence& rep) {
  std::vector<double> out;
  if (rep.empty()) return out;
  out.reserve(rep.size() * rep.front().dim());
  for (const RepresentationFrame& f : rep) {
    const auto flat = f.flatten();
    out.insert(out.end(), flat.begin(), flat.end());
  }
  return out;
}

}  // namespace acrnn
