#pragma once

#include <functional>
#include <string>

#include "acrnn/csv.hpp"
#include "acrnn/rng.hpp"
#include "acrnn/synthesis.hpp"

namespace acrnn {

// Both metrics default to representation space (root displacement + offsets)
// so global position drift does not dominate; absolute space flattens world
// joint positions instead.
enum class MetricSpace { representation, absolute };

// Element t = Euclidean distance between pose vectors t and t+1 over the
// whole flattened vector; length = frames - 1.
std::vector<double> motion_change(const RepSequence& rep);
std::vector<double> motion_change(const MotionClip& clip,
                                  MetricSpace space = MetricSpace::representation);

// Pooled mean per-frame motion change over a corpus; the reference level for
// freeze detection.
double dataset_mean_motion_change(const std::vector<MotionClip>& clips,
                                  MetricSpace space = MetricSpace::representation);

struct FreezeInterval {
  std::size_t begin = 0;  // inclusive
  std::size_t end = 0;    // exclusive
  std::size_t length() const { return end - begin; }
};

// Maximal disjoint runs of >= window_frames consecutive entries below
// rel_threshold * reference_level.
std::vector<FreezeInterval> freeze_detect(const std::vector<double>& series,
                                          double rel_threshold, std::size_t window_frames,
                                          double reference_level);

struct EvalSeedLocation {
  std::size_t clip = 0;
  std::size_t start = 0;  // representation-frame index of the first seed frame
};

struct EvalConfig {
  std::vector<double> horizons_ms = {80, 160, 240, 320, 400, 480, 560, 640};
  std::size_t n_seeds = 20;
  std::size_t seed_frames = 10;
  std::size_t motion_change_frames = 1000;  // generated frames per seed; 0 disables
  MetricSpace space = MetricSpace::representation;
  std::uint64_t eval_seed = 0;
};

struct MethodMetrics {
  std::string name;
  double method_id = 0.0;  // numeric tag for CSV rows (condition length, -1 for sch. smp.)
  std::vector<double> prediction_error;  // per horizon, mean over seeds
  std::vector<double> motion_change_mean;
  std::vector<std::vector<double>> motion_change_per_seed;
};

struct MetricReport {
  std::vector<double> horizons_ms;
  double fps = 0.0;
  std::size_t n_seeds = 0;
  std::vector<MethodMetrics> methods;
};

// Horizon in milliseconds -> generated-frame index (1-based), round(ms*fps/1000).
std::size_t horizon_frame_index(double horizon_ms, double fps);

// Uniformly samples locations that leave room for the seed plus
// horizon_frames generated frames. Skips too-short clips; throws EmptyDataset
// if nothing fits.
std::vector<EvalSeedLocation> pick_eval_seeds(const std::vector<MotionClip>& clips,
                                              std::size_t count, std::size_t seed_frames,
                                              std::size_t horizon_frames, Rng& rng);

using StepperFactory = std::function<std::unique_ptr<Stepper>()>;

// Mean Euclidean distance between the generated and ground-truth pose vector
// at each horizon, averaged over seed locations. Whole-vector norm.
std::vector<double> prediction_error(const StepperFactory& make_stepper,
                                     const std::vector<MotionClip>& clips,
                                     const std::vector<EvalSeedLocation>& seeds,
                                     const EvalConfig& config);

struct MethodSpec {
  std::string name;
  double method_id = 0.0;
  StepperFactory make_stepper;
  NetworkConfig architecture;  // enforced identical across methods
};

// Shared-seed evaluation of several methods over one test set: prediction
// error per horizon plus generated motion-change series. Methods must share
// an architecture; evaluation seeds are fixed by config.eval_seed.
MetricReport compare_methods(const std::vector<MotionClip>& test_clips,
                             const std::vector<MethodSpec>& methods, const EvalConfig& config);

// Table-1-style CSV: one row per method (method_id column, then one error
// column per horizon).
CsvTable prediction_error_table(const MetricReport& report);
// Fig-2-style CSV: frame column plus one mean motion-change column per method.
CsvTable motion_change_table(const MetricReport& report);

void write_metrics_csv(const MetricReport& report, const std::string& path);
CsvTable read_metrics_csv(const std::string& path);
void write_motion_change_csv(const MetricReport& report, const std::string& path);

}  // namespace acrnn
