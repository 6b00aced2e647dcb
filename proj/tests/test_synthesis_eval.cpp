#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <unordered_map>

#include "acrnn/errors.hpp"
#include "acrnn/metrics.hpp"
#include "acrnn/synthesis.hpp"
#include "acrnn/synthetic.hpp"

using namespace acrnn;

namespace {

std::string frame_key(const std::vector<double>& flat) {
  return std::string(reinterpret_cast<const char*>(flat.data()), flat.size() * sizeof(double));
}

// Oracle stepper: looks the fed frame up in the ground truth once, then
// replays the true continuation, optionally shifted by a constant offset.
class ReplayStepper final : public Stepper {
 public:
  ReplayStepper(const std::vector<RepSequence>* reps, std::vector<double> offset = {})
      : reps_(reps), offset_(std::move(offset)) {
    for (std::size_t c = 0; c < reps_->size(); ++c)
      for (std::size_t i = 0; i < (*reps_)[c].size(); ++i)
        index_.emplace(frame_key((*reps_)[c][i].flatten()), std::make_pair(c, i));
  }

  void reset() override { cursor_.reset(); }

  std::vector<double> step(const std::vector<double>& frame) override {
    if (!cursor_) {
      const auto it = index_.find(frame_key(frame));
      REQUIRE(it != index_.end());
      cursor_ = it->second;
    } else {
      ++cursor_->second;
    }
    auto out = (*reps_)[cursor_->first][cursor_->second + 1].flatten();
    for (std::size_t i = 0; i < offset_.size(); ++i) out[i] += offset_[i];
    return out;
  }

 private:
  const std::vector<RepSequence>* reps_;
  std::vector<double> offset_;
  std::unordered_map<std::string, std::pair<std::size_t, std::size_t>> index_;
  std::optional<std::pair<std::size_t, std::size_t>> cursor_;
};

// Predicts its own input forever.
class IdentityStepper final : public Stepper {
 public:
  void reset() override {}
  std::vector<double> step(const std::vector<double>& frame) override { return frame; }
};

class ExplodingStepper final : public Stepper {
 public:
  explicit ExplodingStepper(std::size_t blow_after) : remaining_(blow_after) {}
  void reset() override {}
  std::vector<double> step(const std::vector<double>& frame) override {
    if (remaining_-- == 0)
      return std::vector<double>(frame.size(), std::nan(""));
    return frame;
  }

 private:
  std::size_t remaining_;
};

std::vector<MotionClip> small_corpus(std::size_t frames = 400) {
  Rng rng(404);
  std::vector<MotionClip> clips;
  for (int i = 0; i < 2; ++i)
    clips.push_back(generate_synthetic_dance(default_synthetic_skeleton(), frames, 60.0, rng));
  return clips;
}

}  // namespace

TEST_CASE("synthesize with n_generate = 0 reconstructs the seed") {
  const auto clips = small_corpus(60);
  const RepSequence rep = to_representation(clips[0]);
  const auto skel = clips[0].skeleton;

  NetworkConfig config{27, 8, 2};
  Rng rng(5);
  const NetworkParams params = init_params(config, rng);

  SynthesisRequest request;
  request.seed_frames.assign(rep.begin(), rep.begin() + 10);
  request.n_generate = 0;
  request.initial_root = clips[0].frames[0][skel->root_index];

  const MotionClip out = synthesize(params, request, skel, 60.0);
  REQUIRE(out.frame_count() == 11);  // base frame + 10 seed frames
  for (std::size_t t = 1; t <= 10; ++t)
    for (std::size_t j = 0; j < skel->joint_count(); ++j)
      CHECK((out.frames[t][j] - clips[0].frames[t][j]).norm() < 1e-9);
}

TEST_CASE("synthesize is deterministic") {
  const auto clips = small_corpus(80);
  const RepSequence rep = to_representation(clips[0]);
  NetworkConfig config{27, 12, 3};
  Rng rng(6);
  const NetworkParams params = init_params(config, rng);

  SynthesisRequest request;
  request.seed_frames.assign(rep.begin(), rep.begin() + 10);
  request.n_generate = 40;
  request.initial_root = {0, 0, 0};

  const MotionClip a = synthesize(params, request, clips[0].skeleton, 60.0);
  const MotionClip b = synthesize(params, request, clips[0].skeleton, 60.0);
  CHECK(a.frames == b.frames);
  CHECK(a.frame_count() == 1 + 10 + 40);  // never silently truncates
  a.validate();
}

TEST_CASE("identity stub repeats the last seed frame; the root drifts linearly") {
  const auto clips = small_corpus(60);
  const RepSequence rep = to_representation(clips[0]);
  IdentityStepper identity;
  RepSequence seed(rep.begin(), rep.begin() + 5);
  const RepSequence out = generate_representation(identity, seed, 20);
  REQUIRE(out.size() == 25);
  const auto last_seed = seed.back().flatten();
  for (std::size_t k = 5; k < out.size(); ++k) CHECK(out[k].flatten() == last_seed);

  const MotionClip clip = from_representation(out, {0, 0, 0}, clips[0].skeleton, 60.0);
  const Vec3 step = seed.back().root_displacement;
  const std::size_t root = clips[0].skeleton->root_index;
  for (std::size_t t = 6; t < clip.frame_count(); ++t) {
    const Vec3 moved = clip.frames[t][root] - clip.frames[t - 1][root];
    CHECK(distance(moved, step) < 1e-12);
  }
}

TEST_CASE("divergence raises with the offending frame index") {
  const auto clips = small_corpus(60);
  const RepSequence rep = to_representation(clips[0]);
  ExplodingStepper exploding(12);
  RepSequence seed(rep.begin(), rep.begin() + 5);
  try {
    (void)generate_representation(exploding, seed, 30);
    FAIL("expected DivergenceError");
  } catch (const DivergenceError& e) {
    // 5 seed frames plus 8 finite outputs precede the poisoned one.
    CHECK(e.frame_index == 13);
  }
}

TEST_CASE("horizon frame mapping at 60 fps") {
  const std::vector<double> horizons = {80, 160, 240, 320, 400, 480, 560, 640};
  const std::vector<std::size_t> expected = {5, 10, 14, 19, 24, 29, 34, 38};
  for (std::size_t i = 0; i < horizons.size(); ++i)
    CHECK(horizon_frame_index(horizons[i], 60.0) == expected[i]);
}

TEST_CASE("prediction error of the ground-truth oracle is identically zero") {
  const auto clips = small_corpus();
  std::vector<RepSequence> reps;
  for (const auto& c : clips) reps.push_back(to_representation(c));

  EvalConfig config;
  config.n_seeds = 8;
  config.motion_change_frames = 0;
  Rng rng(1);
  const auto seeds = pick_eval_seeds(clips, config.n_seeds, config.seed_frames, 38, rng);
  const auto errors = prediction_error(
      [&] { return std::make_unique<ReplayStepper>(&reps); }, clips, seeds, config);
  REQUIRE(errors.size() == 8);
  for (double e : errors) CHECK(e == 0.0);
}

TEST_CASE("a constant offset of norm 0.3 reports 0.3 at every horizon") {
  const auto clips = small_corpus();
  std::vector<RepSequence> reps;
  for (const auto& c : clips) reps.push_back(to_representation(c));

  std::vector<double> offset(27, 0.0);
  offset[0] = 0.3;  // unit direction scaled to norm 0.3
  EvalConfig config;
  config.n_seeds = 5;
  config.motion_change_frames = 0;
  Rng rng(2);
  const auto seeds = pick_eval_seeds(clips, config.n_seeds, config.seed_frames, 38, rng);
  const auto errors = prediction_error(
      [&] { return std::make_unique<ReplayStepper>(&reps, offset); }, clips, seeds, config);
  for (double e : errors) CHECK(e == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("absolute-space prediction error: ground-truth oracle still scores zero") {
  const auto clips = small_corpus();
  std::vector<RepSequence> reps;
  for (const auto& c : clips) reps.push_back(to_representation(c));

  EvalConfig config;
  config.n_seeds = 4;
  config.motion_change_frames = 0;
  config.space = MetricSpace::absolute;
  Rng rng(3);
  const auto seeds = pick_eval_seeds(clips, config.n_seeds, config.seed_frames, 38, rng);
  const auto errors = prediction_error(
      [&] { return std::make_unique<ReplayStepper>(&reps); }, clips, seeds, config);
  REQUIRE(errors.size() == 8);
  // Root reconstruction accumulates the true displacements, so the only
  // error is floating-point summation noise.
  for (double e : errors) CHECK(e < 1e-9);
}

TEST_CASE("motion_change basics") {
  SUBCASE("series length is frames - 1") {
    const auto clips = small_corpus(100);
    CHECK(motion_change(clips[0]).size() == 98);  // 99 representation frames
    CHECK(motion_change(clips[0], MetricSpace::absolute).size() == 99);
  }
  SUBCASE("frozen clip gives all zeros") {
    MotionClip clip;
    clip.skeleton = default_synthetic_skeleton();
    clip.fps = 60.0;
    clip.frames.assign(50, clip.skeleton->neutral_pose());
    for (double v : motion_change(clip)) CHECK(v == 0.0);
  }
  SUBCASE("constant velocity single joint steps by 0.2") {
    const auto skel = make_synthetic_skeleton(1);
    MotionClip clip;
    clip.skeleton = skel;
    clip.fps = 60.0;
    for (int t = 0; t < 30; ++t) clip.frames.push_back({Vec3{0.2 * t, 0.0, 0.0}});
    for (double v : motion_change(clip, MetricSpace::absolute))
      CHECK(v == doctest::Approx(0.2).epsilon(1e-12));
    // Representation space: constant displacement, zero change.
    for (double v : motion_change(clip)) CHECK(v == doctest::Approx(0.0));
  }
  SUBCASE("invariant under yaw rotation and rigid translation") {
    const auto clips = small_corpus(120);
    const auto base = motion_change(clips[0], MetricSpace::absolute);

    MotionClip translated = clips[0];
    for (Pose& pose : translated.frames)
      for (Vec3& p : pose) p += Vec3{3.0, -1.0, 12.0};
    const auto shifted = motion_change(translated, MetricSpace::absolute);

    MotionClip rotated = clips[0];
    for (Pose& pose : rotated.frames)
      for (Vec3& p : pose) p = rotate_y(p, 0.83);
    const auto turned = motion_change(rotated, MetricSpace::absolute);

    for (std::size_t i = 0; i < base.size(); ++i) {
      CHECK(shifted[i] == doctest::Approx(base[i]).epsilon(1e-9));
      CHECK(turned[i] == doctest::Approx(base[i]).epsilon(1e-9));
    }
  }
}

TEST_CASE("freeze_detect") {
  SUBCASE("an all-zero series is one frozen interval") {
    const std::vector<double> series(100, 0.0);
    const auto intervals = freeze_detect(series, 0.1, 30, 1.0);
    REQUIRE(intervals.size() == 1);
    CHECK(intervals[0].begin == 0);
    CHECK(intervals[0].end == 100);
  }
  SUBCASE("a lively series has none") {
    const std::vector<double> series(100, 5.0);
    CHECK(freeze_detect(series, 0.1, 30, 1.0).empty());
  }
  SUBCASE("50 live, 40 dead, 50 live finds exactly [50, 90)") {
    std::vector<double> series;
    series.insert(series.end(), 50, 2.0);
    series.insert(series.end(), 40, 0.01);
    series.insert(series.end(), 50, 2.0);
    const auto intervals = freeze_detect(series, 0.1, 30, 1.0);
    REQUIRE(intervals.size() == 1);
    CHECK(intervals[0].begin == 50);
    CHECK(intervals[0].end == 90);
  }
  SUBCASE("runs shorter than the window do not count") {
    std::vector<double> series(100, 2.0);
    for (int i = 40; i < 60; ++i) series[i] = 0.0;  // 20 < 30
    CHECK(freeze_detect(series, 0.1, 30, 1.0).empty());
  }
  SUBCASE("intervals are maximal") {
    std::vector<double> series(100, 2.0);
    for (int i = 10; i < 75; ++i) series[i] = 0.05;
    const auto intervals = freeze_detect(series, 0.1, 30, 1.0);
    REQUIRE(intervals.size() == 1);
    // One frame on either side breaks the condition.
    CHECK(series[intervals[0].begin - 1] >= 0.1);
    CHECK(series[intervals[0].end] >= 0.1);
  }
  SUBCASE("non-positive reference is rejected") {
    CHECK_THROWS_AS(freeze_detect({1.0}, 0.1, 5, 0.0), ContractError);
  }
}

TEST_CASE("compare_methods") {
  const auto clips = small_corpus();
  NetworkConfig config{27, 10, 2};
  Rng rng(50);
  const NetworkParams params = init_params(config, rng);

  EvalConfig eval;
  eval.n_seeds = 4;
  eval.motion_change_frames = 60;

  SUBCASE("identical checkpoints produce identical rows") {
    std::vector<MethodSpec> methods;
    for (const char* name : {"a", "b"})
      methods.push_back({name, 0.0,
                         [&params] { return std::make_unique<NetworkStepper>(params); }, config});
    const MetricReport report = compare_methods(clips, methods, eval);
    REQUIRE(report.methods.size() == 2);
    CHECK(report.methods[0].prediction_error == report.methods[1].prediction_error);
    CHECK(report.methods[0].motion_change_mean == report.methods[1].motion_change_mean);
    CHECK(report.n_seeds == 4);

    const CsvTable errors = prediction_error_table(report);
    CHECK(errors.header.size() == 9);  // method_id + 8 horizons
    CHECK(errors.rows.size() == 2);
    CHECK(errors.rows[0] == errors.rows[1]);

    const CsvTable change = motion_change_table(report);
    CHECK(change.header.size() == 3);
    CHECK(change.rows.size() == 59);  // motion change of 60 generated frames
  }
  SUBCASE("architecture mismatch is rejected") {
    NetworkConfig other = config;
    other.hidden_size = 16;
    std::vector<MethodSpec> methods;
    methods.push_back({"a", 0.0, [] { return nullptr; }, config});
    methods.push_back({"b", 0.0, [] { return nullptr; }, other});
    CHECK_THROWS_AS(compare_methods(clips, methods, eval), ArchMismatch);
  }
}
