// acrnn: dataset preparation, auto-conditioned LSTM training, long-horizon
// synthesis and evaluation, wired into reproducible run directories. Every
// writing command resolves its configuration first, writes it to
// <out>/manifest.toml, then works; re-running with --config manifest.toml
// reproduces the run bit for bit.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "acrnn/bvh.hpp"
#include "acrnn/checkpoint.hpp"
#include "acrnn/csv.hpp"
#include "acrnn/dataset.hpp"
#include "acrnn/errors.hpp"
#include "acrnn/metrics.hpp"
#include "acrnn/run_config.hpp"
#include "acrnn/synthesis.hpp"
#include "acrnn/synthetic.hpp"
#include "acrnn/text.hpp"
#include "acrnn/trainer.hpp"
#include "acrnn/version.hpp"

namespace fs = std::filesystem;
using namespace acrnn;

namespace {

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir + ": " + ec.message());
}

void write_manifest(KeyValues kv, const std::string& command, const std::string& out_dir) {
  kv.set("command", command);
  kv.set("version", kVersion);
  ensure_dir(out_dir);
  kv.write_file((fs::path(out_dir) / "manifest.toml").string());
}

// Option registration helper: a flag that, when given, overrides the config
// file entry of the same key.
struct Overrides {
  CLI::App* cmd;
  std::vector<std::pair<std::string, std::string*>> values;

  std::string* add(const std::string& flag, const std::string& key, const std::string& help) {
    auto* storage = new std::string();  // lives for the program's duration
    cmd->add_option(flag, *storage, help);
    values.emplace_back(key, storage);
    return storage;
  }

  void apply(KeyValues& kv) const {
    for (const auto& [key, storage] : values)
      if (!storage->empty()) kv.set(key, *storage);
  }
};

KeyValues base_config(const std::string& config_path) {
  return config_path.empty() ? KeyValues{} : KeyValues::parse_file(config_path);
}

std::vector<std::size_t> to_sizes(const std::vector<double>& values, const char* what) {
  std::vector<std::size_t> out;
  for (double v : values) {
    if (v < 0 || v != std::floor(v))
      throw ConfigError(std::string(what) + ": expected non-negative integers");
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

ScheduleSpec schedule_from(const KeyValues& kv) {
  ScheduleSpec spec;
  const std::string mode = kv.get_string("mode", "ac");
  if (mode == "ac")
    spec.mode = ScheduleMode::auto_conditioned;
  else if (mode == "vanilla")
    spec.mode = ScheduleMode::vanilla;
  else if (mode == "ss")
    spec.mode = ScheduleMode::scheduled_sampling;
  else
    throw ConfigError("mode must be one of ac|vanilla|ss, got '" + mode + "'");
  spec.ground_truth_len = kv.get_u64("u", 5);
  spec.condition_len = kv.get_u64("v", 5);
  spec.self_feed_prob = kv.get_double("ss_prob", 0.5);
  return spec;
}

NetworkConfig network_from(const KeyValues& kv, std::size_t input_dim) {
  NetworkConfig net;
  net.input_dim = input_dim;
  net.hidden_size = kv.get_u64("hidden", 128);
  net.num_layers = kv.get_u64("layers", 3);
  return net;
}

TrainRunConfig train_run_from(const KeyValues& kv) {
  TrainRunConfig run;
  run.schedule = schedule_from(kv);
  run.sequence_length = kv.get_u64("seq_len", 100);
  run.batch_size = kv.get_u64("batch", 32);
  run.iterations = kv.get_u64("iterations", 10000);
  run.lr = kv.get_double("lr", 0.0001);
  run.seed = kv.get_u64("seed", 0);
  run.checkpoint_every = kv.get_u64("checkpoint_every", 1000);
  run.log_every = kv.get_u64("log_every", 1);
  run.strides = to_sizes(kv.get_list("strides", {1, 2, 3}), "strides");
  run.rotations_per_window = kv.get_u64("rotations_per_window", 1);
  const std::string loss_steps = kv.get_string("loss_steps", "all");
  if (loss_steps == "all")
    run.options.loss_all_steps = true;
  else if (loss_steps == "gt")
    run.options.loss_all_steps = false;
  else
    throw ConfigError("loss_steps must be all|gt, got '" + loss_steps + "'");
  run.options.stop_gradient = kv.get_bool("stop_gradient", false);
  return run;
}

// Fills in every training default so the manifest alone reproduces the run.
void materialize_train_defaults(KeyValues& kv) {
  const TrainRunConfig run = train_run_from(kv);
  kv.set("mode", kv.get_string("mode", "ac"));
  kv.set_u64("u", run.schedule.ground_truth_len);
  kv.set_u64("v", run.schedule.condition_len);
  kv.set_double("ss_prob", run.schedule.self_feed_prob);
  kv.set_u64("hidden", kv.get_u64("hidden", 128));
  kv.set_u64("layers", kv.get_u64("layers", 3));
  kv.set_u64("seq_len", run.sequence_length);
  kv.set_u64("batch", run.batch_size);
  kv.set_u64("iterations", run.iterations);
  kv.set_double("lr", run.lr);
  kv.set_u64("seed", run.seed);
  kv.set_u64("checkpoint_every", run.checkpoint_every);
  kv.set_u64("log_every", run.log_every);
  std::string strides;
  for (std::size_t s : run.strides) strides += (strides.empty() ? "" : ",") + std::to_string(s);
  kv.set("strides", strides);
  kv.set_u64("rotations_per_window", run.rotations_per_window);
  kv.set("loss_steps", run.options.loss_all_steps ? "all" : "gt");
  kv.set_bool("stop_gradient", run.options.stop_gradient);
}

std::string checkpoint_name(std::uint64_t iteration) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "ckpt_%08llu.acrn",
                static_cast<unsigned long long>(iteration));
  return buf;
}

std::optional<std::pair<std::uint64_t, std::string>> latest_checkpoint(const std::string& dir) {
  std::optional<std::pair<std::uint64_t, std::string>> best;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) return best;
  for (const auto& entry : fs::directory_iterator(dir, ec)) {
    const std::string name = entry.path().filename().string();
    if (name.rfind("ckpt_", 0) != 0 || entry.path().extension() != ".acrn") continue;
    const auto iter = parse_int(std::string_view(name).substr(5, name.size() - 10));
    if (!iter) continue;
    if (!best || static_cast<std::uint64_t>(*iter) > best->first)
      best = {static_cast<std::uint64_t>(*iter), entry.path().string()};
  }
  return best;
}

// --- subcommand bodies ------------------------------------------------------

int cmd_dataset_gen(KeyValues kv) {
  const std::string out_dir = kv.get_string("out_dir", "");
  if (out_dir.empty()) throw ConfigError("dataset gen: --out is required");
  const SyntheticConfig defaults;
  kv.set_u64("clips", kv.get_u64("clips", 5));
  kv.set_u64("clip_frames", kv.get_u64("clip_frames", 4000));
  kv.set_double("fps", kv.get_double("fps", 60.0));
  kv.set_u64("joints", kv.get_u64("joints", 9));
  kv.set_u64("seed", kv.get_u64("seed", 0));
  kv.set_double("amplitude", kv.get_double("amplitude", defaults.amplitude));
  kv.set_u64("bank_oscillators", kv.get_u64("bank_oscillators", defaults.bank_oscillators));
  kv.set_u64("components_min", kv.get_u64("components_min", defaults.components_min));
  kv.set_u64("components_max", kv.get_u64("components_max", defaults.components_max));
  kv.set_double("freq_min_hz", kv.get_double("freq_min_hz", defaults.freq_min_hz));
  kv.set_double("freq_max_hz", kv.get_double("freq_max_hz", defaults.freq_max_hz));
  kv.set_double("osc_scale_m", kv.get_double("osc_scale_m", defaults.osc_scale_m));
  kv.set_double("root_speed_mps", kv.get_double("root_speed_mps", defaults.root_speed_mps));
  kv.set_double("bob_amplitude_m", kv.get_double("bob_amplitude_m", defaults.bob_amplitude_m));
  kv.set_bool("dead_times", kv.get_bool("dead_times", defaults.dead_times));
  kv.set_bool("periodic_rests", kv.get_bool("periodic_rests", defaults.periodic_rests));
  kv.set_double("dead_time_every_s", kv.get_double("dead_time_every_s", defaults.dead_time_every_s));
  kv.set_double("dead_time_len_s", kv.get_double("dead_time_len_s", defaults.dead_time_len_s));
  kv.set_double("rest_floor", kv.get_double("rest_floor", defaults.rest_floor));
  write_manifest(kv, "dataset-gen", out_dir);

  const auto skeleton = make_synthetic_skeleton(kv.get_u64("joints", 9));
  SyntheticConfig config;
  config.amplitude = kv.get_double("amplitude", defaults.amplitude);
  // One style per corpus; clips are separate performances of it.
  config.bank_oscillators = kv.get_u64("bank_oscillators", defaults.bank_oscillators);
  config.components_min = kv.get_u64("components_min", defaults.components_min);
  config.components_max = kv.get_u64("components_max", defaults.components_max);
  config.freq_min_hz = kv.get_double("freq_min_hz", defaults.freq_min_hz);
  config.freq_max_hz = kv.get_double("freq_max_hz", defaults.freq_max_hz);
  config.osc_scale_m = kv.get_double("osc_scale_m", defaults.osc_scale_m);
  config.root_speed_mps = kv.get_double("root_speed_mps", defaults.root_speed_mps);
  config.bob_amplitude_m = kv.get_double("bob_amplitude_m", defaults.bob_amplitude_m);
  config.dead_times = kv.get_bool("dead_times", defaults.dead_times);
  config.periodic_rests = kv.get_bool("periodic_rests", defaults.periodic_rests);
  config.dead_time_every_s = kv.get_double("dead_time_every_s", defaults.dead_time_every_s);
  config.dead_time_len_s = kv.get_double("dead_time_len_s", defaults.dead_time_len_s);
  config.rest_floor = kv.get_double("rest_floor", defaults.rest_floor);
  Rng style_rng(Rng::mix(kv.get_u64("seed", 0), 0x7374796cULL));  // "styl"
  const DanceStyle style = make_dance_style(*skeleton, style_rng, config);
  const std::uint64_t clips = kv.get_u64("clips", 5);
  for (std::uint64_t c = 0; c < clips; ++c) {
    Rng rng(Rng::mix(Rng::mix(kv.get_u64("seed", 0), kStreamGen), c));
    const MotionClip clip =
        generate_synthetic_dance(skeleton, style, kv.get_u64("clip_frames", 4000),
                                 kv.get_double("fps", 60.0), rng, config);
    char name[32];
    std::snprintf(name, sizeof(name), "clip_%03llu.bvh", static_cast<unsigned long long>(c));
    write_bvh_file(clip, (fs::path(out_dir) / name).string());
  }
  std::cout << "wrote " << clips << " clips to " << out_dir << "\n";
  return 0;
}

int cmd_dataset_import(KeyValues kv) {
  const std::string in_dir = kv.get_string("data_dir", "");
  const std::string out_dir = kv.get_string("out_dir", "");
  if (in_dir.empty() || out_dir.empty())
    throw ConfigError("dataset import: --in and --out are required");
  kv.set_double("scale", kv.get_double("scale", 0.0));
  kv.set_double("target_height", kv.get_double("target_height", 1.54));
  write_manifest(kv, "dataset-import", out_dir);

  const auto files = list_bvh_files(in_dir);
  if (files.empty()) throw EmptyDataset("dataset import: no .bvh files in " + in_dir);
  for (const std::string& file : files) {
    const BvhDocument doc = parse_bvh_file(file);
    double scale = kv.get_double("scale", 0.0);
    if (scale <= 0.0) scale = import_scale(doc, kv.get_double("target_height", 1.54));
    MotionClip clip = bvh_to_clip(doc, scale);
    clip.id = fs::path(file).filename().string();
    write_bvh_file(clip, (fs::path(out_dir) / clip.id).string());
    std::cout << clip.id << ": scale " << format_double(scale) << ", " << clip.frame_count()
              << " frames\n";
  }
  return 0;
}

int cmd_dataset_inspect(const std::string& in_dir) {
  const auto clips = load_dataset(in_dir);
  std::size_t total_frames = 0;
  for (const MotionClip& clip : clips) {
    const double mc = clip.frame_count() >= 3 ? dataset_mean_motion_change({clip}) : 0.0;
    std::cout << clip.id << ": joints=" << clip.joint_count() << " fps=" << clip.fps
              << " frames=" << clip.frame_count() << " mean_motion_change=" << format_double(mc)
              << "\n";
    total_frames += clip.frame_count();
  }
  std::string overall = "n/a";
  try {
    overall = format_double(dataset_mean_motion_change(clips));
  } catch (const EmptyDataset&) {
  }
  std::cout << "total: " << clips.size() << " clips, " << total_frames
            << " frames, dataset mean motion change " << overall << "\n";
  return 0;
}

int cmd_train(KeyValues kv, bool resume) {
  const std::string out_dir = kv.get_string("out_dir", "");
  if (out_dir.empty()) throw ConfigError("train: --out is required");

  std::optional<Checkpoint> resume_from;
  if (resume) {
    // The manifest is the configuration of record for a resumed run.
    const std::string manifest_path = (fs::path(out_dir) / "manifest.toml").string();
    kv = KeyValues::parse_file(manifest_path);
    const auto latest = latest_checkpoint(out_dir);
    if (!latest) throw ConfigError("train --resume: no checkpoint found in " + out_dir);
    resume_from = load_checkpoint(latest->second);
  }

  const std::string data_dir = kv.get_string("data_dir", "");
  if (data_dir.empty()) throw ConfigError("train: --data is required");
  materialize_train_defaults(kv);

  const auto clips = load_dataset(data_dir);
  const std::size_t input_dim = 3 * clips.front().joint_count();
  const NetworkConfig net = network_from(kv, input_dim);
  const TrainRunConfig run = train_run_from(kv);

  if (!resume) write_manifest(kv, "train", out_dir);

  const std::string loss_path = (fs::path(out_dir) / "loss.csv").string();
  std::vector<std::pair<std::uint64_t, double>> kept_rows;
  if (resume && fs::exists(loss_path)) {
    // Drop rows past the checkpoint we restart from; they will be re-earned.
    const CsvTable old = read_csv_file(loss_path);
    for (const auto& row : old.rows)
      if (row.size() == 2 && row[0] <= static_cast<double>(resume_from->adam.step_count))
        kept_rows.emplace_back(static_cast<std::uint64_t>(row[0]), row[1]);
  }
  std::ofstream loss_out(loss_path, std::ios::binary);
  if (!loss_out) throw IoError("cannot open " + loss_path);
  loss_out << "iteration,loss\n";
  for (const auto& [iter, loss] : kept_rows)
    loss_out << iter << ',' << format_double(loss) << '\n';
  loss_out.flush();

  TrainSinks sinks;
  sinks.on_log = [&](std::uint64_t iter, double loss) {
    loss_out << iter << ',' << format_double(loss) << '\n';
    loss_out.flush();
  };
  sinks.on_checkpoint = [&](std::uint64_t iter, const NetworkParams& params,
                            const AdamState& adam) {
    save_checkpoint(params, adam, (fs::path(out_dir) / checkpoint_name(iter)).string());
  };

  const TrainResult result = train(run, net, clips, sinks, std::move(resume_from));
  std::cout << "trained to iteration " << result.adam.step_count << ", final checkpoint "
            << checkpoint_name(result.adam.step_count) << "\n";
  return 0;
}

int cmd_synthesize(KeyValues kv) {
  const std::string out_dir = kv.get_string("out_dir", "");
  const std::string ckpt = kv.get_string("checkpoint", "");
  const std::string data_dir = kv.get_string("data_dir", "");
  if (out_dir.empty() || ckpt.empty() || data_dir.empty())
    throw ConfigError("synthesize: --checkpoint, --data and --out are required");
  kv.set_u64("frames", kv.get_u64("frames", 100));
  kv.set_u64("seed_frames", kv.get_u64("seed_frames", 10));
  kv.set_u64("clip", kv.get_u64("clip", 0));
  kv.set_u64("start", kv.get_u64("start", 0));
  write_manifest(kv, "synthesize", out_dir);

  const Checkpoint checkpoint = load_checkpoint(ckpt);
  const auto clips = load_dataset(data_dir);
  const std::size_t clip_index = kv.get_u64("clip", 0);
  if (clip_index >= clips.size())
    throw ConfigError("synthesize: clip index " + std::to_string(clip_index) + " out of range");
  const MotionClip& source = clips[clip_index];
  const RepSequence rep = to_representation(source);

  SynthesisRequest request;
  const std::size_t start = kv.get_u64("start", 0);
  const std::size_t seed_frames = kv.get_u64("seed_frames", 10);
  if (start + seed_frames > rep.size())
    throw ConfigError("synthesize: seed window past end of clip");
  request.seed_frames.assign(rep.begin() + start, rep.begin() + start + seed_frames);
  request.n_generate = kv.get_u64("frames", 100);
  request.initial_root = source.frames[start][source.skeleton->root_index];

  const MotionClip result = synthesize(checkpoint.params, request, source.skeleton, source.fps);
  const std::string path = (fs::path(out_dir) / "synthesis.bvh").string();
  write_bvh_file(result, path);
  std::cout << "wrote " << result.frame_count() << " frames to " << path << "\n";
  return 0;
}

EvalConfig eval_config_from(const KeyValues& kv) {
  EvalConfig config;
  config.horizons_ms = kv.get_list("horizons", {80, 160, 240, 320, 400, 480, 560, 640});
  config.n_seeds = kv.get_u64("eval_seeds", 20);
  config.seed_frames = kv.get_u64("seed_frames", 10);
  config.motion_change_frames = kv.get_u64("mc_frames", 1000);
  config.eval_seed = kv.get_u64("seed", 0);
  const std::string space = kv.get_string("metric_space", "rep");
  if (space == "rep")
    config.space = MetricSpace::representation;
  else if (space == "absolute")
    config.space = MetricSpace::absolute;
  else
    throw ConfigError("metric_space must be rep|absolute, got '" + space + "'");
  return config;
}

void materialize_eval_defaults(KeyValues& kv) {
  const EvalConfig config = eval_config_from(kv);
  std::string horizons;
  for (double h : config.horizons_ms)
    horizons += (horizons.empty() ? "" : ",") + format_double(h);
  kv.set("horizons", horizons);
  kv.set_u64("eval_seeds", config.n_seeds);
  kv.set_u64("seed_frames", config.seed_frames);
  kv.set_u64("mc_frames", config.motion_change_frames);
  kv.set_u64("seed", config.eval_seed);
  kv.set("metric_space", kv.get_string("metric_space", "rep"));
}

int cmd_evaluate(KeyValues kv) {
  const std::string out_dir = kv.get_string("out_dir", "");
  const std::string ckpt = kv.get_string("checkpoint", "");
  const std::string data_dir = kv.get_string("data_dir", "");
  if (out_dir.empty() || ckpt.empty() || data_dir.empty())
    throw ConfigError("evaluate: --checkpoint, --data and --out are required");
  materialize_eval_defaults(kv);
  write_manifest(kv, "evaluate", out_dir);

  const Checkpoint checkpoint = load_checkpoint(ckpt);
  const auto clips = load_dataset(data_dir);
  if (3 * clips.front().joint_count() != checkpoint.params.config.input_dim)
    throw ShapeError("evaluate: dataset dimension does not match checkpoint");

  const EvalConfig config = eval_config_from(kv);
  std::vector<MethodSpec> methods;
  const NetworkParams& params = checkpoint.params;
  methods.push_back({fs::path(ckpt).stem().string(), 0.0,
                     [&params] { return std::make_unique<NetworkStepper>(params); },
                     params.config});
  const MetricReport report = compare_methods(clips, methods, config);
  write_metrics_csv(report, (fs::path(out_dir) / "prediction_error.csv").string());
  write_motion_change_csv(report, (fs::path(out_dir) / "motion_change.csv").string());
  std::cout << "wrote prediction_error.csv and motion_change.csv to " << out_dir << "\n";
  return 0;
}

int cmd_sweep(KeyValues kv) {
  const std::string out_dir = kv.get_string("out_dir", "");
  const std::string data_dir = kv.get_string("data_dir", "");
  if (out_dir.empty() || data_dir.empty())
    throw ConfigError("sweep: --data and --out are required");
  materialize_train_defaults(kv);
  materialize_eval_defaults(kv);
  const auto v_list = to_sizes(kv.get_list("v_list", {1, 2, 5, 10}), "v_list");
  std::string v_str;
  for (std::size_t v : v_list) v_str += (v_str.empty() ? "" : ",") + std::to_string(v);
  kv.set("v_list", v_str);
  kv.set_bool("include_ss", kv.get_bool("include_ss", true));
  write_manifest(kv, "sweep", out_dir);

  const auto clips = load_dataset(data_dir);
  const std::size_t input_dim = 3 * clips.front().joint_count();
  const NetworkConfig net = network_from(kv, input_dim);

  struct SweepEntry {
    std::string name;
    double method_id;
    ScheduleSpec schedule;
  };
  std::vector<SweepEntry> entries;
  for (std::size_t v : v_list) {
    ScheduleSpec spec;
    spec.mode = ScheduleMode::auto_conditioned;
    spec.ground_truth_len = kv.get_u64("u", 5);
    spec.condition_len = v;
    entries.push_back({"ac_v" + std::to_string(v), static_cast<double>(v), spec});
  }
  if (kv.get_bool("include_ss", true)) {
    ScheduleSpec spec;
    spec.mode = ScheduleMode::scheduled_sampling;
    spec.self_feed_prob = kv.get_double("ss_prob", 0.5);
    entries.push_back({"ss", -1.0, spec});
  }

  // Train (or reuse) one checkpoint per schedule; identical architecture and
  // seed everywhere, so differences come from the schedule alone.
  std::vector<Checkpoint> trained;
  for (const SweepEntry& entry : entries) {
    const std::string model_dir = (fs::path(out_dir) / "models" / entry.name).string();
    ensure_dir(model_dir);
    TrainRunConfig run = train_run_from(kv);
    run.schedule = entry.schedule;
    const auto existing = latest_checkpoint(model_dir);
    if (existing && existing->first >= run.iterations) {
      std::cout << entry.name << ": reusing " << existing->second << "\n";
      trained.push_back(load_checkpoint(existing->second));
      continue;
    }
    std::cout << entry.name << ": training " << run.iterations << " iterations\n";
    TrainSinks sinks;
    sinks.on_checkpoint = [&](std::uint64_t iter, const NetworkParams& params,
                              const AdamState& adam) {
      save_checkpoint(params, adam, (fs::path(model_dir) / checkpoint_name(iter)).string());
    };
    TrainResult result = train(run, net, clips, sinks);
    trained.push_back({std::move(result.params), std::move(result.adam)});
  }

  std::vector<MethodSpec> methods;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const NetworkParams& params = trained[i].params;
    methods.push_back({entries[i].name, entries[i].method_id,
                       [&params] { return std::make_unique<NetworkStepper>(params); },
                       params.config});
  }
  const MetricReport report = compare_methods(clips, methods, eval_config_from(kv));
  write_metrics_csv(report, (fs::path(out_dir) / "sweep_error.csv").string());
  write_motion_change_csv(report, (fs::path(out_dir) / "sweep_motion_change.csv").string());
  std::cout << "wrote sweep_error.csv and sweep_motion_change.csv to " << out_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"auto-conditioned LSTM motion synthesis"};
  app.require_subcommand(1);

  std::string config_path;

  // dataset
  CLI::App* dataset = app.add_subcommand("dataset", "generate, import or inspect motion data");
  dataset->require_subcommand(1);

  CLI::App* gen = dataset->add_subcommand("gen", "generate the synthetic dance corpus");
  Overrides gen_opts{gen, {}};
  gen->add_option("--config", config_path, "config file");
  gen_opts.add("--out", "out_dir", "output dataset directory");
  gen_opts.add("--clips", "clips", "number of clips");
  gen_opts.add("--frames", "clip_frames", "frames per clip");
  gen_opts.add("--fps", "fps", "frames per second");
  gen_opts.add("--joints", "joints", "synthetic skeleton joint count");
  gen_opts.add("--seed", "seed", "master seed");
  gen_opts.add("--amplitude", "amplitude", "global motion scale");

  CLI::App* import_cmd = dataset->add_subcommand("import", "ingest a BVH directory, normalized to meters");
  Overrides import_opts{import_cmd, {}};
  import_cmd->add_option("--config", config_path, "config file");
  import_opts.add("--in", "data_dir", "source BVH directory");
  import_opts.add("--out", "out_dir", "normalized output directory");
  import_opts.add("--scale", "scale", "explicit unit scale (0 = auto height normalization)");
  import_opts.add("--target-height", "target_height", "auto-normalization height, meters");

  std::string inspect_dir;
  CLI::App* inspect = dataset->add_subcommand("inspect", "print dataset statistics");
  inspect->add_option("--in", inspect_dir, "dataset directory")->required();

  // train
  CLI::App* train_cmd = app.add_subcommand("train", "train a network on a dataset");
  Overrides train_opts{train_cmd, {}};
  bool resume = false;
  train_cmd->add_option("--config", config_path, "config file");
  train_cmd->add_flag("--resume", resume, "continue from the latest checkpoint in --out");
  train_opts.add("--data", "data_dir", "dataset directory");
  train_opts.add("--out", "out_dir", "run directory");
  train_opts.add("--seed", "seed", "master seed");
  train_opts.add("--mode", "mode", "schedule: ac|vanilla|ss");
  train_opts.add("--u", "u", "ground-truth length");
  train_opts.add("--v", "v", "condition length");
  train_opts.add("--ss-prob", "ss_prob", "scheduled-sampling probability");
  train_opts.add("--hidden", "hidden", "hidden size");
  train_opts.add("--layers", "layers", "LSTM layer count");
  train_opts.add("--seq-len", "seq_len", "training sequence length");
  train_opts.add("--iterations", "iterations", "training iterations");
  train_opts.add("--lr", "lr", "learning rate");
  train_opts.add("--batch", "batch", "batch size");
  train_opts.add("--checkpoint-every", "checkpoint_every", "checkpoint cadence");
  train_opts.add("--log-every", "log_every", "loss log cadence");
  train_opts.add("--strides", "strides", "frame-rate strides, e.g. 1,2,3");
  train_opts.add("--rotations", "rotations_per_window", "rotated copies per window");
  train_opts.add("--loss-steps", "loss_steps", "score all|gt steps");
  train_opts.add("--stop-gradient", "stop_gradient", "detach self-fed inputs (true|false)");

  // synthesize
  CLI::App* synth = app.add_subcommand("synthesize", "generate motion from a checkpoint");
  Overrides synth_opts{synth, {}};
  synth->add_option("--config", config_path, "config file");
  synth_opts.add("--checkpoint", "checkpoint", "checkpoint file");
  synth_opts.add("--data", "data_dir", "dataset supplying the seed motion");
  synth_opts.add("--out", "out_dir", "run directory");
  synth_opts.add("--frames", "frames", "frames to generate");
  synth_opts.add("--seed-frames", "seed_frames", "ground-truth seed frames");
  synth_opts.add("--clip", "clip", "seed clip index");
  synth_opts.add("--start", "start", "seed start frame");

  // evaluate
  CLI::App* eval_cmd = app.add_subcommand("evaluate", "prediction error and motion change");
  Overrides eval_opts{eval_cmd, {}};
  eval_cmd->add_option("--config", config_path, "config file");
  eval_opts.add("--checkpoint", "checkpoint", "checkpoint file");
  eval_opts.add("--data", "data_dir", "test dataset directory");
  eval_opts.add("--out", "out_dir", "run directory");
  eval_opts.add("--horizons", "horizons", "horizons in ms, comma separated");
  eval_opts.add("--eval-seeds", "eval_seeds", "number of random seed motions");
  eval_opts.add("--seed-frames", "seed_frames", "seed length in frames");
  eval_opts.add("--mc-frames", "mc_frames", "generated frames for motion change");
  eval_opts.add("--metric-space", "metric_space", "rep|absolute");
  eval_opts.add("--seed", "seed", "evaluation seed");

  // sweep
  CLI::App* sweep = app.add_subcommand("sweep", "condition-length sweep plus scheduled sampling");
  Overrides sweep_opts{sweep, {}};
  sweep->add_option("--config", config_path, "config file");
  sweep_opts.add("--data", "data_dir", "dataset directory");
  sweep_opts.add("--out", "out_dir", "run directory");
  sweep_opts.add("--v-list", "v_list", "condition lengths, e.g. 1,2,5,10");
  sweep_opts.add("--include-ss", "include_ss", "also train scheduled sampling (true|false)");
  sweep_opts.add("--u", "u", "ground-truth length");
  sweep_opts.add("--ss-prob", "ss_prob", "scheduled-sampling probability");
  sweep_opts.add("--hidden", "hidden", "hidden size");
  sweep_opts.add("--layers", "layers", "LSTM layer count");
  sweep_opts.add("--seq-len", "seq_len", "training sequence length");
  sweep_opts.add("--iterations", "iterations", "training iterations per model");
  sweep_opts.add("--lr", "lr", "learning rate");
  sweep_opts.add("--batch", "batch", "batch size");
  sweep_opts.add("--strides", "strides", "frame-rate strides, e.g. 1,2,3");
  sweep_opts.add("--seed", "seed", "master seed");
  sweep_opts.add("--horizons", "horizons", "horizons in ms");
  sweep_opts.add("--eval-seeds", "eval_seeds", "number of random seed motions");
  sweep_opts.add("--mc-frames", "mc_frames", "generated frames for motion change");
  sweep_opts.add("--metric-space", "metric_space", "rep|absolute");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return static_cast<int>(ErrorClass::config);
  }

  try {
    auto resolved = [&](const Overrides& opts) {
      KeyValues kv = base_config(config_path);
      opts.apply(kv);
      return kv;
    };
    if (gen->parsed()) return cmd_dataset_gen(resolved(gen_opts));
    if (import_cmd->parsed()) return cmd_dataset_import(resolved(import_opts));
    if (inspect->parsed()) return cmd_dataset_inspect(inspect_dir);
    if (train_cmd->parsed()) return cmd_train(resolved(train_opts), resume);
    if (synth->parsed()) return cmd_synthesize(resolved(synth_opts));
    if (eval_cmd->parsed()) return cmd_evaluate(resolved(eval_opts));
    if (sweep->parsed()) return cmd_sweep(resolved(sweep_opts));
    throw ConfigError("no subcommand");
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(e.error_class);
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return static_cast<int>(ErrorClass::internal);
  }
}
