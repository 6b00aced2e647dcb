#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "acrnn/errors.hpp"
#include "acrnn/metrics.hpp"
#include "acrnn/representation.hpp"
#include "acrnn/synthetic.hpp"
#include "acrnn/windows.hpp"

using namespace acrnn;

namespace {

MotionClip static_clip(std::shared_ptr<const Skeleton> skel, std::size_t frames) {
  MotionClip clip;
  clip.skeleton = skel;
  clip.fps = 60.0;
  const Pose pose = skel->neutral_pose();
  clip.frames.assign(frames, pose);
  return clip;
}

double max_abs_diff(const RepSequence& a, const RepSequence& b) {
  REQUIRE(a.size() == b.size());
  double worst = 0.0;
  for (std::size_t t = 0; t < a.size(); ++t) {
    const auto fa = a[t].flatten();
    const auto fb = b[t].flatten();
    REQUIRE(fa.size() == fb.size());
    for (std::size_t i = 0; i < fa.size(); ++i)
      worst = std::max(worst, std::abs(fa[i] - fb[i]));
  }
  return worst;
}

}  // namespace

TEST_CASE("to_representation: a static pose gives zero displacements") {
  const auto skel = default_synthetic_skeleton();
  const MotionClip clip = static_clip(skel, 5);
  const RepSequence rep = to_representation(clip);
  REQUIRE(rep.size() == 4);
  for (const auto& f : rep) {
    CHECK(f.root_displacement == Vec3{});
    CHECK(f.relative_offsets.size() == skel->joint_count() - 1);
  }
  // Offsets constant across frames.
  for (std::size_t t = 1; t < rep.size(); ++t)
    CHECK(rep[t].flatten() == rep[0].flatten());
}

TEST_CASE("to_representation: pure root translation leaves offsets unchanged") {
  const auto skel = default_synthetic_skeleton();
  MotionClip clip = static_clip(skel, 6);
  for (std::size_t t = 0; t < clip.frames.size(); ++t)
    for (Vec3& p : clip.frames[t]) p.x += 0.1 * static_cast<double>(t);
  const RepSequence rep = to_representation(clip);
  for (std::size_t t = 0; t < rep.size(); ++t) {
    CHECK(rep[t].root_displacement.x == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(rep[t].root_displacement.y == 0.0);
    CHECK(rep[t].root_displacement.z == 0.0);
    for (std::size_t j = 0; j < rep[t].relative_offsets.size(); ++j)
      CHECK(distance(rep[t].relative_offsets[j], rep[0].relative_offsets[j]) < 1e-12);
  }
}

TEST_CASE("to_representation: root-only skeleton gives D = 3") {
  const auto skel = make_synthetic_skeleton(1);
  const MotionClip clip = static_clip(skel, 3);
  const RepSequence rep = to_representation(clip);
  CHECK(rep.front().relative_offsets.empty());
  CHECK(rep.front().dim() == 3);
}

TEST_CASE("to_representation: fewer than 2 frames is an error") {
  const auto skel = default_synthetic_skeleton();
  CHECK_THROWS_AS(to_representation(static_clip(skel, 1)), InsufficientFrames);
}

TEST_CASE("from_representation: roots are the cumulative sum of displacements") {
  const auto skel = make_synthetic_skeleton(1);
  RepresentationFrame step;
  step.root_displacement = {0.1, 0.0, 0.0};
  const RepSequence rep(3, step);

  const MotionClip from_origin = from_representation(rep, {0, 0, 0}, skel, 60.0);
  CHECK(from_origin.frames.back()[0].x == doctest::Approx(0.3).epsilon(1e-12));

  RepresentationFrame still;
  const MotionClip fixed = from_representation(RepSequence(4, still), {1, 2, 3}, skel, 60.0);
  for (const Pose& pose : fixed.frames) {
    CHECK(pose[0].x == 1.0);
    CHECK(pose[0].y == 2.0);
    CHECK(pose[0].z == 3.0);
  }
}

TEST_CASE("from_representation: dimension mismatch is a ShapeError") {
  const auto skel = default_synthetic_skeleton();  // 9 joints
  RepresentationFrame f;
  f.relative_offsets.resize(3);  // 4 joints' worth
  CHECK_THROWS_AS(from_representation({f}, {0, 0, 0}, skel, 60.0), ShapeError);
}

TEST_CASE("representation round trips") {
  Rng rng(21);
  const auto skel = default_synthetic_skeleton();
  const MotionClip clip = generate_synthetic_dance(skel, 50, 60.0, rng);
  const RepSequence rep = to_representation(clip);

  SUBCASE("to_representation(from_representation(x)) == x exactly") {
    const MotionClip rebuilt = from_representation(rep, {0.5, 0.9, -0.2}, skel, 60.0);
    CHECK(max_abs_diff(to_representation(rebuilt), rep) < 1e-9);
  }
  SUBCASE("from_representation reproduces clip frames 2..N") {
    const std::size_t root = skel->root_index;
    const MotionClip rebuilt = from_representation(rep, clip.frames[0][root], skel, 60.0);
    REQUIRE(rebuilt.frame_count() == clip.frame_count());
    double worst = 0.0;
    for (std::size_t t = 1; t < clip.frame_count(); ++t)
      for (std::size_t j = 0; j < skel->joint_count(); ++j)
        worst = std::max(worst, (rebuilt.frames[t][j] - clip.frames[t][j]).norm());
    CHECK(worst < 1e-9);
  }
}

TEST_CASE("augment_rotate conventions and invariants") {
  Rng rng(22);
  const auto skel = default_synthetic_skeleton();
  const RepSequence rep = to_representation(generate_synthetic_dance(skel, 30, 60.0, rng));

  SUBCASE("angle 0 is the identity") {
    CHECK(max_abs_diff(augment_rotate(rep, 0.0), rep) == 0.0);
  }
  SUBCASE("angle pi applied twice is the identity") {
    const double pi = std::acos(-1.0);
    CHECK(max_abs_diff(augment_rotate(augment_rotate(rep, pi), pi), rep) < 1e-12);
  }
  SUBCASE("quarter turn maps +x to -z") {
    RepresentationFrame f;
    f.root_displacement = {0.1, 0.0, 0.0};
    const auto turned = augment_rotate({f}, std::acos(-1.0) / 2.0);
    CHECK(turned[0].root_displacement.x == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(turned[0].root_displacement.y == 0.0);
    CHECK(turned[0].root_displacement.z == doctest::Approx(-0.1).epsilon(1e-12));
  }
  SUBCASE("norms and inter-joint distances survive rotation") {
    const RepSequence turned = augment_rotate(rep, 1.234567);
    for (std::size_t t = 0; t < rep.size(); ++t) {
      CHECK(turned[t].root_displacement.norm() ==
            doctest::Approx(rep[t].root_displacement.norm()).epsilon(1e-12));
      const auto& a = rep[t].relative_offsets;
      const auto& b = turned[t].relative_offsets;
      for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(b[i].norm() == doctest::Approx(a[i].norm()).epsilon(1e-12));
        for (std::size_t j = i + 1; j < a.size(); ++j)
          CHECK(distance(b[i], b[j]) == doctest::Approx(distance(a[i], a[j])).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("subsample") {
  Rng rng(23);
  const auto skel = default_synthetic_skeleton();
  const MotionClip clip = generate_synthetic_dance(skel, 100, 60.0, rng);

  SUBCASE("stride 1 is the identity") {
    const MotionClip out = subsample(clip, 1);
    CHECK(out.frame_count() == 100);
    CHECK(out.fps == 60.0);
    CHECK(out.frames == clip.frames);
  }
  SUBCASE("stride 2 halves the frame count and fps") {
    const MotionClip out = subsample(clip, 2);
    CHECK(out.frame_count() == 50);
    CHECK(out.fps == 30.0);
  }
  SUBCASE("stride past the end keeps a single frame") {
    const MotionClip out = subsample(clip, 1000);
    CHECK(out.frame_count() == 1);
  }
  SUBCASE("stride 0 is rejected") { CHECK_THROWS_AS(subsample(clip, 0), InvalidStride); }
  SUBCASE("subsample composes multiplicatively") {
    const MotionClip ab = subsample(subsample(clip, 2), 3);
    const MotionClip direct = subsample(clip, 6);
    CHECK(ab.frames == direct.frames);
    CHECK(ab.fps == doctest::Approx(direct.fps));
  }
}

TEST_CASE("make_windows start-offset arithmetic") {
  Rng gen_rng(24);
  const auto skel = default_synthetic_skeleton();

  SUBCASE("101 frames, L=100, stride 1: exactly one start") {
    const std::vector<MotionClip> clips = {generate_synthetic_dance(skel, 101, 60.0, gen_rng)};
    Rng rng(0);
    const auto windows = make_windows(clips, 100, {1}, 0, rng);
    CHECK(windows.size() == 1);
    CHECK(windows[0].realize(clips, 100).size() == 100);
  }
  SUBCASE("301 frames, strides {1,2,3}: 201, 101 and 1 starts") {
    const std::vector<MotionClip> clips = {generate_synthetic_dance(skel, 301, 60.0, gen_rng)};
    Rng rng(0);
    const auto windows = make_windows(clips, 100, {1, 2, 3}, 0, rng);
    std::size_t counts[4] = {};
    for (const auto& w : windows) counts[w.stride]++;
    CHECK(counts[1] == 201);
    CHECK(counts[2] == 101);
    CHECK(counts[3] == 1);
    CHECK(windows.size() == 303);
  }
  SUBCASE("same seed gives the identical window list") {
    const std::vector<MotionClip> clips = {generate_synthetic_dance(skel, 301, 60.0, gen_rng)};
    Rng r1(77), r2(77);
    const auto w1 = make_windows(clips, 100, {1, 2}, 2, r1);
    const auto w2 = make_windows(clips, 100, {1, 2}, 2, r2);
    REQUIRE(w1.size() == w2.size());
    for (std::size_t i = 0; i < w1.size(); ++i) {
      CHECK(w1[i].source_clip == w2[i].source_clip);
      CHECK(w1[i].start == w2[i].start);
      CHECK(w1[i].stride == w2[i].stride);
      CHECK(w1[i].yaw_rad == w2[i].yaw_rad);
    }
    CHECK(max_abs_diff(w1.front().realize(clips, 100), w2.front().realize(clips, 100)) == 0.0);
  }
  SUBCASE("no clip long enough raises EmptyDataset") {
    const std::vector<MotionClip> clips = {generate_synthetic_dance(skel, 50, 60.0, gen_rng)};
    Rng rng(0);
    CHECK_THROWS_AS(make_windows(clips, 100, {1, 2, 3}, 0, rng), EmptyDataset);
  }
}

TEST_CASE("synthetic dance generator") {
  const auto skel = default_synthetic_skeleton();

  SUBCASE("amplitude 0 freezes the clip") {
    SyntheticConfig config;
    config.amplitude = 0.0;
    Rng rng(1);
    const MotionClip clip = generate_synthetic_dance(skel, 50, 60.0, rng, config);
    for (double change : motion_change(clip, MetricSpace::absolute)) CHECK(change == 0.0);
  }
  SUBCASE("same seed, same clip") {
    Rng r1(9), r2(9);
    const MotionClip a = generate_synthetic_dance(skel, 40, 60.0, r1);
    const MotionClip b = generate_synthetic_dance(skel, 40, 60.0, r2);
    CHECK(a.frames == b.frames);
  }
  SUBCASE("pure sinusoid repeats with its period") {
    SyntheticConfig config;
    config.components_min = 1;
    config.components_max = 1;
    const double period_frames = 40.0;
    config.freq_min_hz = 60.0 / period_frames;
    config.freq_max_hz = config.freq_min_hz;
    config.root_speed_mps = 0.0;
    config.bob_amplitude_m = 0.0;
    config.body_turn = false;
    config.dead_times = false;
    Rng rng(5);
    const MotionClip clip = generate_synthetic_dance(skel, 130, 60.0, rng, config);
    for (std::size_t t = 0; t + 40 < clip.frame_count(); ++t)
      for (std::size_t j = 0; j < skel->joint_count(); ++j)
        CHECK((clip.frames[t][j] - clip.frames[t + 40][j]).norm() < 1e-9);
  }
  SUBCASE("default config moves") {
    Rng rng(2);
    const MotionClip clip = generate_synthetic_dance(skel, 600, 60.0, rng);
    CHECK(dataset_mean_motion_change({clip}) > 0.0);
    clip.validate();
  }
}
