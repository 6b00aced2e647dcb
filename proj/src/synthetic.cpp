#include "acrnn/synthetic.hpp"

#include <cmath>

#include "acrnn/errors.hpp"

namespace acrnn {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kPi = kTwoPi / 2.0;
}  // namespace

std::shared_ptr<const Skeleton> default_synthetic_skeleton() { return make_synthetic_skeleton(9); }

std::shared_ptr<const Skeleton> make_synthetic_skeleton(std::size_t joints) {
  if (joints < 1) throw ContractError("synthetic skeleton: need at least the root joint");
  const std::vector<Joint> base = {
      {"hip", std::nullopt, {0.0, 0.90, 0.0}},
      {"spine", 0, {0.0, 0.25, 0.0}},
      {"head", 1, {0.0, 0.39, 0.0}},
      {"l_hand", 1, {-0.45, 0.05, 0.0}},
      {"r_hand", 1, {0.45, 0.05, 0.0}},
      {"l_knee", 0, {-0.12, -0.45, 0.0}},
      {"l_foot", 5, {-0.02, -0.45, 0.05}},
      {"r_knee", 0, {0.12, -0.45, 0.0}},
      {"r_foot", 7, {0.02, -0.45, 0.05}},
  };
  auto skel = std::make_shared<Skeleton>();
  for (std::size_t i = 0; i < joints && i < base.size(); ++i) skel->joints.push_back(base[i]);
  for (std::size_t i = base.size(); i < joints; ++i) {
    // Extras alternate sides off the spine when present, else off the root.
    const std::size_t parent = joints > 1 && skel->joints.size() > 1 ? 1 : 0;
    const double side = (i % 2 == 0) ? 1.0 : -1.0;
    const double reach = 0.15 + 0.05 * static_cast<double>((i - base.size()) / 2);
    skel->joints.push_back(
        {"extra_" + std::to_string(i), parent, {side * reach, 0.12, side * 0.04}});
  }
  skel->root_index = 0;
  skel->height_m = 1.54;
  skel->validate();
  return skel;
}

DanceStyle make_dance_style(const Skeleton& skeleton, Rng& rng, const SyntheticConfig& config) {
  DanceStyle style;
  const std::size_t bank_size =
      std::max<std::size_t>({config.bank_oscillators, config.components_max, 1});
  style.bank.resize(bank_size);
  for (auto& osc : style.bank) {
    osc.freq_hz = rng.uniform(config.freq_min_hz, config.freq_max_hz);
    osc.phase = rng.uniform(0.0, kTwoPi);
  }
  style.bob_phase = rng.uniform(0.0, kTwoPi);

  const std::size_t joints = skeleton.joint_count();
  style.per_joint.resize(joints);
  for (std::size_t j = 0; j < joints; ++j) {
    if (j == skeleton.root_index) continue;
    const std::size_t span = config.components_max - config.components_min;
    const std::size_t count =
        std::min(bank_size, config.components_min + (span ? rng.below(span + 1) : 0));
    std::vector<std::size_t> slots(bank_size);
    for (std::size_t i = 0; i < bank_size; ++i) slots[i] = i;
    for (std::size_t c = 0; c < count; ++c) {
      const std::size_t pick = c + rng.below(bank_size - c);
      std::swap(slots[c], slots[pick]);
      DanceStyle::Component comp;
      comp.bank_index = slots[c];
      const double az = rng.uniform(0.0, kTwoPi);
      const double el = rng.uniform(-0.9, 0.9);
      comp.direction = {std::cos(az) * std::cos(el), std::sin(el), std::sin(az) * std::cos(el)};
      comp.amplitude = config.amplitude * config.osc_scale_m * rng.uniform(0.35, 1.0);
      comp.phase_offset = rng.uniform(0.0, kTwoPi);
      style.per_joint[j].push_back(comp);
    }
  }
  return style;
}

MotionClip generate_synthetic_dance(std::shared_ptr<const Skeleton> skeleton,
                                    const DanceStyle& style, std::size_t n_frames, double fps,
                                    Rng& rng, const SyntheticConfig& config) {
  if (n_frames < 2) throw InsufficientFrames("generate_synthetic_dance: need >= 2 frames");
  const Skeleton& skel = *skeleton;
  const std::size_t joints = skel.joint_count();
  const std::size_t root = skel.root_index;
  if (style.per_joint.size() != joints)
    throw ContractError("generate_synthetic_dance: style was built for another skeleton");
  const auto neutral = skel.neutral_pose();
  const double amp = config.amplitude;

  // Per-performance traits: where in the never-repeating rhythm this take
  // starts, and how the performer travels.
  const double time_offset_s = rng.uniform(0.0, 1000.0);
  const double heading0 = rng.uniform(0.0, kTwoPi);
  const double heading_swing = rng.uniform(0.4, 1.1);
  const double heading_freq = rng.uniform(0.02, 0.06);
  const double heading_phase = rng.uniform(0.0, kTwoPi);
  const double speed = amp * config.root_speed_mps * rng.uniform(0.6, 1.4);
  const double body_yaw_swing = rng.uniform(0.15, 0.35);

  struct Rest {
    double start_s;
    double len_s;
  };
  const double total_s = static_cast<double>(n_frames) / fps;
  std::vector<Rest> rests;
  if (config.dead_times) {
    if (config.periodic_rests && config.dead_time_every_s > 0.0) {
      double t = config.dead_time_every_s * rng.uniform(0.6, 1.4);
      while (t < total_s) {
        rests.push_back({t, config.dead_time_len_s * rng.uniform(0.7, 1.3)});
        t += config.dead_time_every_s * rng.uniform(0.7, 1.3);
      }
    } else {
      // The performance starts from a rest position and settles back into one.
      rests.push_back({-1.0, 1.0 + config.dead_time_len_s});
      rests.push_back({total_s - config.dead_time_len_s, config.dead_time_len_s + 1.0});
    }
  }
  const double ramp_s = 0.3;
  const double floor = config.rest_floor;
  auto ramp = [&](double x) { return 0.5 * (1.0 - std::cos(kPi * x)); };  // 0 -> 1, smooth
  auto envelope = [&](double t_s) {
    double env = 1.0;
    for (const Rest& r : rests) {
      if (t_s < r.start_s - ramp_s || t_s > r.start_s + r.len_s + ramp_s) continue;
      double e = 0.0;
      if (t_s < r.start_s)
        e = ramp((r.start_s - t_s) / ramp_s);
      else if (t_s > r.start_s + r.len_s)
        e = ramp((t_s - r.start_s - r.len_s) / ramp_s);
      env = std::min(env, e);
    }
    return floor + (1.0 - floor) * env;
  };

  auto beat = [&](std::size_t index, double t_s, double extra_phase) {
    const DanceStyle::Oscillator& osc = style.bank[index];
    return std::sin(kTwoPi * osc.freq_hz * (t_s + time_offset_s) + osc.phase + extra_phase);
  };

  MotionClip clip;
  clip.skeleton = skeleton;
  clip.fps = fps;
  clip.frames.reserve(n_frames);

  Vec3 root_pos = neutral[root];
  for (std::size_t t = 0; t < n_frames; ++t) {
    const double t_s = static_cast<double>(t) / fps;
    const double env = envelope(t_s);
    const double heading =
        heading0 + heading_swing * std::sin(kTwoPi * heading_freq * t_s + heading_phase);

    if (t > 0) {
      const double v = env * speed * (0.65 + 0.35 * beat(0, t_s, 0.0));
      root_pos.x += (v / fps) * std::cos(heading);
      root_pos.z += (v / fps) * std::sin(heading);
    }
    Vec3 root_now = root_pos;
    root_now.y =
        neutral[root].y + env * amp * config.bob_amplitude_m * beat(0, t_s, style.bob_phase);

    Pose pose(joints);
    pose[root] = root_now;
    const double body_yaw =
        config.body_turn ? env * amp * body_yaw_swing * std::sin(heading - heading0) : 0.0;
    for (std::size_t j = 0; j < joints; ++j) {
      if (j == root) continue;
      Vec3 offset = neutral[j] - neutral[root];
      for (const DanceStyle::Component& comp : style.per_joint[j])
        offset += comp.direction *
                  (env * comp.amplitude * beat(comp.bank_index, t_s, comp.phase_offset));
      pose[j] = root_now + rotate_y(offset, body_yaw);
    }
    clip.frames.push_back(std::move(pose));
  }
  return clip;
}

MotionClip generate_synthetic_dance(std::shared_ptr<const Skeleton> skeleton,
                                    std::size_t n_frames, double fps, Rng& rng,
                                    const SyntheticConfig& config) {
  const DanceStyle style = make_dance_style(*skeleton, rng, config);
  return generate_synthetic_dance(std::move(skeleton), style, n_frames, fps, rng, config);
}

}  // namespace acrnn
