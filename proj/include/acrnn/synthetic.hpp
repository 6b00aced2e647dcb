#pragma once

#include <cstdint>
#include <vector>

#include "acrnn/rng.hpp"
#include "acrnn/skeleton.hpp"

namespace acrnn {

// Nine-joint test skeleton, 1.54 m tall in neutral pose, y up.
std::shared_ptr<const Skeleton> default_synthetic_skeleton();

// Same skeleton truncated or extended to an arbitrary joint count (extra
// joints hang off the spine); joints == 1 is the root-only degenerate case.
std::shared_ptr<const Skeleton> make_synthetic_skeleton(std::size_t joints);

// Procedural dance generator. A style is a small bank of mutually
// incommensurate oscillators plus per-joint choreography: every joint sums
// 2-4 bank components through its own direction, gain and phase offset, the
// way limbs lock to one rhythm. Clips are performances of a style: each gets
// its own entry point into the (never-repeating) rhythm, walking path and
// rest intervals, while the root drifts slowly and rest "dead-times" ease
// the body toward the neutral pose.
struct SyntheticConfig {
  double amplitude = 1.0;        // global motion scale; 0 freezes the clip
  std::size_t bank_oscillators = 5;
  std::size_t components_min = 2;
  std::size_t components_max = 4;  // per joint, drawn from the bank
  double freq_min_hz = 0.3;
  double freq_max_hz = 1.2;
  double osc_scale_m = 0.17;     // per-component amplitude cap
  double root_speed_mps = 0.3;   // mean travel speed
  double bob_amplitude_m = 0.03;
  bool body_turn = true;         // yaw the body toward its heading
  // Rest intervals: a clip begins and ends in a rest ("edges"), or rests
  // recur at random times throughout ("periodic").
  bool dead_times = true;
  bool periodic_rests = false;
  double dead_time_every_s = 20.0;  // periodic mode
  double dead_time_len_s = 0.9;     // rest length, either mode
  double rest_floor = 0.2;          // residual sway inside rests
};

struct DanceStyle {
  struct Oscillator {
    double freq_hz;
    double phase;
  };
  struct Component {
    std::size_t bank_index;
    Vec3 direction;
    double amplitude;
    double phase_offset;
  };
  std::vector<Oscillator> bank;
  std::vector<std::vector<Component>> per_joint;
  double bob_phase = 0.0;
};

DanceStyle make_dance_style(const Skeleton& skeleton, Rng& rng, const SyntheticConfig& config);

// One performance of a style. Deterministic per (style, rng seed).
MotionClip generate_synthetic_dance(std::shared_ptr<const Skeleton> skeleton,
                                    const DanceStyle& style, std::size_t n_frames, double fps,
                                    Rng& rng, const SyntheticConfig& config = {});

// Single-seed flavor: derives the style and the performance from one rng.
MotionClip generate_synthetic_dance(std::shared_ptr<const Skeleton> skeleton,
                                    std::size_t n_frames, double fps, Rng& rng,
                                    const SyntheticConfig& config = {});

}  // namespace acrnn
