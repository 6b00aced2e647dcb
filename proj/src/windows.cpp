#include "acrnn/windows.hpp"

#include <algorithm>

#include "acrnn/errors.hpp"

namespace acrnn {

RepSequence TrainingWindow::realize(const std::vector<MotionClip>& clips,
                                    std::size_t length) const {
  const MotionClip& clip = clips.at(source_clip);
  const std::size_t last = start + length * stride;
  if (stride < 1) throw InvalidStride("window: stride must be >= 1");
  if (last >= clip.frame_count())
    throw ContractError("window: slice past end of clip " + clip.id);

  MotionClip slice;
  slice.skeleton = clip.skeleton;
  slice.fps = clip.fps / static_cast<double>(stride);
  slice.frames.reserve(length + 1);
  for (std::size_t i = 0; i <= length; ++i) slice.frames.push_back(clip.frames[start + i * stride]);

  RepSequence rep = to_representation(slice);
  if (yaw_rad != 0.0) rep = augment_rotate(rep, yaw_rad);
  return rep;
}

std::vector<TrainingWindow> make_windows(const std::vector<MotionClip>& clips, std::size_t length,
                                         const std::vector<std::size_t>& strides,
                                         std::size_t rotations_per_window, Rng& rng) {
  if (length < 1) throw ContractError("make_windows: length must be >= 1");
  std::vector<std::size_t> ordered = strides;
  std::sort(ordered.begin(), ordered.end());
  ordered.erase(std::unique(ordered.begin(), ordered.end()), ordered.end());
  if (ordered.empty() || ordered.front() < 1)
    throw InvalidStride("make_windows: strides must be >= 1");

  std::vector<TrainingWindow> windows;
  for (std::size_t c = 0; c < clips.size(); ++c) {
    const std::size_t frames = clips[c].frame_count();
    for (std::size_t stride : ordered) {
      const std::size_t span = length * stride;
      if (frames < span + 1) continue;
      for (std::size_t start = 0; start + span < frames; ++start) {
        if (rotations_per_window == 0) {
          windows.push_back({c, start, stride, 0.0});
        } else {
          for (std::size_t r = 0; r < rotations_per_window; ++r)
            windows.push_back({c, start, stride, rng.uniform(0.0, 6.283185307179586)});
        }
      }
    }
  }
  if (windows.empty())
    throw EmptyDataset("make_windows: no clip is long enough for length " +
                       std::to_string(length) + " at any stride");
  return windows;
}

}  // namespace acrnn
