#include "acrnn/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "acrnn/errors.hpp"
#include "acrnn/kernels.hpp"

namespace acrnn {

namespace {

std::vector<double> flatten_pose(const Pose& pose) {
  std::vector<double> out;
  out.reserve(pose.size() * 3);
  for (const Vec3& p : pose) {
    out.push_back(p.x);
    out.push_back(p.y);
    out.push_back(p.z);
  }
  return out;
}

double euclidean(const std::vector<double>& a, const std::vector<double>& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return std::sqrt(acc);
}

}  // namespace

std::vector<double> motion_change(const RepSequence& rep) {
  if (rep.size() < 2) throw InsufficientFrames("motion_change: need at least 2 frames");
  std::vector<double> out;
  out.reserve(rep.size() - 1);
  std::vector<double> prev = rep[0].flatten();
  for (std::size_t t = 1; t < rep.size(); ++t) {
    std::vector<double> cur = rep[t].flatten();
    out.push_back(euclidean(prev, cur));
    prev = std::move(cur);
  }
  return out;
}

std::vector<double> motion_change(const MotionClip& clip, MetricSpace space) {
  if (space == MetricSpace::representation) return motion_change(to_representation(clip));
  if (clip.frame_count() < 2) throw InsufficientFrames("motion_change: need at least 2 frames");
  std::vector<double> out;
  out.reserve(clip.frame_count() - 1);
  for (std::size_t t = 1; t < clip.frame_count(); ++t)
    out.push_back(euclidean(flatten_pose(clip.frames[t - 1]), flatten_pose(clip.frames[t])));
  return out;
}

double dataset_mean_motion_change(const std::vector<MotionClip>& clips, MetricSpace space) {
  const std::size_t min_frames = space == MetricSpace::representation ? 3 : 2;
  double total = 0.0;
  std::size_t count = 0;
  for (const MotionClip& clip : clips) {
    if (clip.frame_count() < min_frames) continue;
    const auto series = motion_change(clip, space);
    for (double v : series) total += v;
    count += series.size();
  }
  if (count == 0) throw EmptyDataset("dataset_mean_motion_change: no transitions");
  return total / static_cast<double>(count);
}

std::vector<FreezeInterval> freeze_detect(const std::vector<double>& series, double rel_threshold,
                                          std::size_t window_frames, double reference_level) {
  if (!(reference_level > 0.0))
    throw ContractError("freeze_detect: reference level must be positive");
  const double threshold = rel_threshold * reference_level;
  std::vector<FreezeInterval> out;
  std::size_t run_start = 0;
  bool in_run = false;
  for (std::size_t i = 0; i <= series.size(); ++i) {
    const bool below = i < series.size() && series[i] < threshold;
    if (below && !in_run) {
      in_run = true;
      run_start = i;
    } else if (!below && in_run) {
      in_run = false;
      if (i - run_start >= window_frames) out.push_back({run_start, i});
    }
  }
  return out;
}

std::size_t horizon_frame_index(double horizon_ms, double fps) {
  const double idx = std::round(horizon_ms * fps / 1000.0);
  if (!(idx >= 1.0)) throw ConfigError("horizon below one frame at this fps");
  return static_cast<std::size_t>(idx);
}

std::vector<EvalSeedLocation> pick_eval_seeds(const std::vector<MotionClip>& clips,
                                              std::size_t count, std::size_t seed_frames,
                                              std::size_t horizon_frames, Rng& rng) {
  // Valid starts per clip in representation-frame indexing.
  std::vector<std::pair<std::size_t, std::size_t>> room;  // clip -> start count
  std::size_t total = 0;
  const std::size_t need = seed_frames + horizon_frames;
  for (std::size_t c = 0; c < clips.size(); ++c) {
    const std::size_t rep_frames = clips[c].frame_count() ? clips[c].frame_count() - 1 : 0;
    if (rep_frames < need) continue;
    const std::size_t starts = rep_frames - need + 1;
    room.emplace_back(c, starts);
    total += starts;
  }
  if (total == 0)
    throw EmptyDataset("pick_eval_seeds: no clip is long enough for seed + horizon");

  std::vector<EvalSeedLocation> seeds;
  seeds.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::uint64_t pick = rng.below(total);
    for (const auto& [clip, starts] : room) {
      if (pick < starts) {
        seeds.push_back({clip, static_cast<std::size_t>(pick)});
        break;
      }
      pick -= starts;
    }
  }
  return seeds;
}

namespace {

struct SeedEval {
  std::vector<double> errors;               // per horizon
  std::vector<double> motion_change_series;  // generated frames only
};

SeedEval evaluate_seed(Stepper& stepper, const MotionClip& clip, const RepSequence& rep,
                       std::size_t start, const EvalConfig& config,
                       const std::vector<std::size_t>& horizon_frames, std::size_t generate) {
  RepSequence seed(rep.begin() + start, rep.begin() + start + config.seed_frames);
  const RepSequence generated = generate_representation(stepper, seed, generate);

  SeedEval out;
  out.errors.reserve(horizon_frames.size());

  if (config.space == MetricSpace::representation) {
    for (std::size_t idx : horizon_frames) {
      const auto& pred = generated[config.seed_frames + idx - 1];
      const auto& truth = rep[start + config.seed_frames + idx - 1];
      out.errors.push_back(euclidean(pred.flatten(), truth.flatten()));
    }
  } else {
    // Anchor the reconstruction at the ground-truth root of the last seed
    // frame; rep index i maps to clip frame i + 1.
    const std::size_t root_joint = clip.skeleton->root_index;
    const Vec3 anchor = clip.frames[start + config.seed_frames][root_joint];
    Vec3 root = anchor;
    std::size_t next_horizon = 0;
    for (std::size_t k = 1; k <= generate && next_horizon < horizon_frames.size(); ++k) {
      const auto& pred = generated[config.seed_frames + k - 1];
      root += pred.root_displacement;
      if (k == horizon_frames[next_horizon]) {
        Pose pose(clip.skeleton->joint_count());
        pose[root_joint] = root;
        std::size_t off = 0;
        for (std::size_t j = 0; j < pose.size(); ++j) {
          if (j == root_joint) continue;
          pose[j] = root + pred.relative_offsets[off++];
        }
        const Pose& truth = clip.frames[start + config.seed_frames + k];
        out.errors.push_back(euclidean(flatten_pose(pose), flatten_pose(truth)));
        ++next_horizon;
      }
    }
  }

  if (config.motion_change_frames > 0) {
    RepSequence gen_only(generated.begin() + config.seed_frames, generated.end());
    if (gen_only.size() >= 2) out.motion_change_series = motion_change(gen_only);
  }
  return out;
}

}  // namespace

std::vector<double> prediction_error(const StepperFactory& make_stepper,
                                     const std::vector<MotionClip>& clips,
                                     const std::vector<EvalSeedLocation>& seeds,
                                     const EvalConfig& config) {
  if (clips.empty()) throw EmptyDataset("prediction_error: no test clips");
  const double fps = clips.front().fps;
  std::vector<std::size_t> horizon_frames;
  horizon_frames.reserve(config.horizons_ms.size());
  for (double ms : config.horizons_ms) horizon_frames.push_back(horizon_frame_index(ms, fps));

  std::vector<RepSequence> reps;
  reps.reserve(clips.size());
  for (const MotionClip& c : clips) reps.push_back(to_representation(c));

  const std::size_t generate = horizon_frames.empty() ? 0 : horizon_frames.back();
  std::vector<double> sums(horizon_frames.size(), 0.0);
  for (const EvalSeedLocation& loc : seeds) {
    auto stepper = make_stepper();
    const SeedEval eval = evaluate_seed(*stepper, clips[loc.clip], reps[loc.clip], loc.start,
                                        config, horizon_frames, generate);
    for (std::size_t h = 0; h < sums.size(); ++h) sums[h] += eval.errors[h];
  }
  for (double& s : sums) s /= static_cast<double>(seeds.empty() ? 1 : seeds.size());
  return sums;
}

MetricReport compare_methods(const std::vector<MotionClip>& test_clips,
                             const std::vector<MethodSpec>& methods, const EvalConfig& config) {
  if (methods.empty()) throw ContractError("compare_methods: no methods");
  if (test_clips.empty()) throw EmptyDataset("compare_methods: no test clips");
  for (const MethodSpec& m : methods)
    if (!(m.architecture == methods.front().architecture))
      throw ArchMismatch("compare_methods: '" + m.name + "' and '" + methods.front().name +
                         "' differ in architecture; differences must come from training alone");

  const double fps = test_clips.front().fps;
  std::vector<std::size_t> horizon_frames;
  for (double ms : config.horizons_ms) horizon_frames.push_back(horizon_frame_index(ms, fps));
  const std::size_t horizon_reach = horizon_frames.empty() ? 0 : horizon_frames.back();
  const std::size_t generate = std::max(horizon_reach, config.motion_change_frames);

  Rng eval_rng(Rng::mix(config.eval_seed, kStreamEval));
  const auto seeds =
      pick_eval_seeds(test_clips, config.n_seeds, config.seed_frames, generate, eval_rng);

  std::vector<RepSequence> reps;
  reps.reserve(test_clips.size());
  for (const MotionClip& c : test_clips) reps.push_back(to_representation(c));

  MetricReport report;
  report.horizons_ms = config.horizons_ms;
  report.fps = fps;
  report.n_seeds = seeds.size();

  for (const MethodSpec& method : methods) {
    MethodMetrics metrics;
    metrics.name = method.name;
    metrics.method_id = method.method_id;
    metrics.motion_change_per_seed.resize(seeds.size());
    std::vector<std::vector<double>> per_seed_errors(seeds.size());

    // Seeds are independent; slots keep the merge order deterministic.
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(kernels::thread_cap())
#endif
    for (std::ptrdiff_t s = 0; s < static_cast<std::ptrdiff_t>(seeds.size()); ++s) {
      const EvalSeedLocation& loc = seeds[s];
      auto stepper = method.make_stepper();
      const SeedEval eval = evaluate_seed(*stepper, test_clips[loc.clip], reps[loc.clip],
                                          loc.start, config, horizon_frames, generate);
      per_seed_errors[s] = eval.errors;
      metrics.motion_change_per_seed[s] = eval.motion_change_series;
    }

    metrics.prediction_error.assign(horizon_frames.size(), 0.0);
    for (const auto& errs : per_seed_errors)
      for (std::size_t h = 0; h < errs.size(); ++h) metrics.prediction_error[h] += errs[h];
    for (double& e : metrics.prediction_error) e /= static_cast<double>(seeds.size());

    if (config.motion_change_frames > 0 && !metrics.motion_change_per_seed.empty()) {
      const std::size_t series_len = metrics.motion_change_per_seed.front().size();
      metrics.motion_change_mean.assign(series_len, 0.0);
      for (const auto& series : metrics.motion_change_per_seed)
        for (std::size_t i = 0; i < series_len; ++i) metrics.motion_change_mean[i] += series[i];
      for (double& v : metrics.motion_change_mean) v /= static_cast<double>(seeds.size());
    }
    report.methods.push_back(std::move(metrics));
  }
  return report;
}

CsvTable prediction_error_table(const MetricReport& report) {
  CsvTable table;
  table.header.push_back("method_id");
  for (double ms : report.horizons_ms)
    table.header.push_back("error_" + std::to_string(static_cast<long long>(ms)) + "ms");
  for (const MethodMetrics& m : report.methods) {
    std::vector<double> row;
    row.push_back(m.method_id);
    row.insert(row.end(), m.prediction_error.begin(), m.prediction_error.end());
    table.rows.push_back(std::move(row));
  }
  return table;
}

CsvTable motion_change_table(const MetricReport& report) {
  CsvTable table;
  table.header.push_back("frame");
  std::size_t frames = 0;
  for (const MethodMetrics& m : report.methods) {
    table.header.push_back(m.name);
    frames = std::max(frames, m.motion_change_mean.size());
  }
  for (std::size_t f = 0; f < frames; ++f) {
    std::vector<double> row;
    row.push_back(static_cast<double>(f + 1));
    for (const MethodMetrics& m : report.methods)
      row.push_back(f < m.motion_change_mean.size() ? m.motion_change_mean[f] : 0.0);
    table.rows.push_back(std::move(row));
  }
  return table;
}

void write_metrics_csv(const MetricReport& report, const std::string& path) {
  write_csv_file(prediction_error_table(report), path);
}

CsvTable read_metrics_csv(const std::string& path) { return read_csv_file(path); }

void write_motion_change_csv(const MetricReport& report, const std::string& path) {
  write_csv_file(motion_change_table(report), path);
}

}  // namespace acrnn
