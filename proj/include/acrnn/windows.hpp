#pragma once

#include <vector>

#include "acrnn/representation.hpp"
#include "acrnn/rng.hpp"

namespace acrnn {

// A training window is a strided slice of a source clip: absolute frames
// start, start+stride, ..., start+L*stride (L+1 frames, so L representation
// frames), optionally yawed. Frames are realized on demand; the full window
// set over a corpus is far too large to materialize eagerly.
struct TrainingWindow {
  std::size_t source_clip = 0;
  std::size_t start = 0;
  std::size_t stride = 1;
  double yaw_rad = 0.0;

  // Exactly `length` representation frames.
  RepSequence realize(const std::vector<MotionClip>& clips, std::size_t length) const;
};

// Enumerates every (clip, stride, start) slice with L+1 source frames, in
// deterministic order, then assigns rotations_per_window yawed copies per
// slice (0 keeps one unrotated copy). Output depends only on inputs and the
// rng seed.
std::vector<TrainingWindow> make_windows(const std::vector<MotionClip>& clips, std::size_t length,
                                         const std::vector<std::size_t>& strides,
                                         std::size_t rotations_per_window, Rng& rng);

}  // namespace acrnn
