#include "acrnn/trainer.hpp"

#include <cmath>
#include <utility>

#include "acrnn/errors.hpp"

namespace acrnn {

StepLoss step_loss(Tape& tape, const NetworkConfig& config, const ParamVars& params,
                   MemoryVars& memory, Var input_var, const Tensor& target) {
  if (target.cols() != config.input_dim)
    throw ShapeError("step_loss: target width " + target.shape_string() + ", expected D=" +
                     std::to_string(config.input_dim));
  StepLoss out;
  out.prediction = network_step_tape(tape, config, params, memory, input_var);
  out.loss = tape.sum_squares_diff(out.prediction, tape.leaf(target));
  return out;
}

namespace {

// Stacks batch[i][t] into one [B, D] matrix per timestep.
Tensor gather_step(const std::vector<RepSequence>& batch, std::size_t t, std::size_t dim) {
  Tensor out({batch.size(), dim});
  for (std::size_t b = 0; b < batch.size(); ++b) {
    const auto flat = batch[b][t].flatten();
    if (flat.size() != dim)
      throw ShapeError("train_sequence: frame dim " + std::to_string(flat.size()) +
                       " does not match network D=" + std::to_string(dim));
    for (std::size_t i = 0; i < dim; ++i) out.at(b, i) = flat[i];
  }
  return out;
}

}  // namespace

SequenceResult train_sequence(const NetworkParams& params, const std::vector<RepSequence>& batch,
                              const ScheduleMask& mask, const TrainOptions& options) {
  Tape tape;
  return train_sequence_on(tape, params, batch, mask, options);
}

SequenceResult train_sequence_on(Tape& tape, const NetworkParams& params,
                                 const std::vector<RepSequence>& batch, const ScheduleMask& mask,
                                 const TrainOptions& options) {
  if (batch.empty()) throw EmptyDataset("train_sequence: empty batch");
  const std::size_t length = mask.length();
  if (length < 2) throw ContractError("train_sequence: need at least 2 frames per window");
  for (const RepSequence& seq : batch)
    if (seq.size() != length)
      throw ContractError("train_sequence: window length " + std::to_string(seq.size()) +
                          " does not match mask length " + std::to_string(length));
  if (mask.source[0] == StepSource::self_fed)
    throw ContractError("train_sequence: step 0 has no previous prediction to feed");

  const NetworkConfig& config = params.config;
  const std::size_t batch_size = batch.size();

  tape.reset();
  tape.reserve(length * (config.num_layers * 14 + 6) + 32);
  const ParamVars param_vars = insert_params(tape, params);
  MemoryVars memory = insert_zero_memory(tape, config, batch_size);

  Var total;
  std::size_t scored_steps = 0;
  Var previous_prediction;

  for (std::size_t t = 0; t + 1 < length; ++t) {
    const bool self_fed = mask.source[t] == StepSource::self_fed;
    Var input;
    if (!self_fed)
      input = tape.leaf(gather_step(batch, t, config.input_dim));
    else if (options.stop_gradient)
      input = tape.leaf(tape.value(previous_prediction));
    else
      input = previous_prediction;

    const Tensor target = gather_step(batch, t + 1, config.input_dim);
    const bool scored = options.loss_all_steps || !self_fed;
    Var prediction;
    if (scored) {
      StepLoss step = step_loss(tape, config, param_vars, memory, input, target);
      prediction = step.prediction;
      total = total.valid() ? tape.add(total, step.loss) : step.loss;
      ++scored_steps;
    } else {
      prediction = network_step_tape(tape, config, param_vars, memory, input);
    }
    if (options.probe) options.probe(t, self_fed, tape.value(input), tape.value(prediction));
    previous_prediction = prediction;
  }

  if (!total.valid()) throw ContractError("train_sequence: no step was scored");
  total = tape.scale(total, 1.0 / (static_cast<double>(scored_steps) *
                                   static_cast<double>(batch_size)));
  tape.backward(total);

  SequenceResult result;
  result.loss = tape.value(total)[0];
  const auto ordered = param_vars.ordered();
  result.gradients.reserve(ordered.size());
  for (Var v : ordered) result.gradients.push_back(tape.grad(v));
  return result;
}

SequenceResult train_sequence(const NetworkParams& params, const RepSequence& window,
                              const ScheduleMask& mask, const TrainOptions& options) {
  return train_sequence(params, std::vector<RepSequence>{window}, mask, options);
}

void TrainRunConfig::validate() const {
  schedule.validate();
  if (sequence_length < 2) throw ConfigError("train: sequence length must be >= 2");
  if (batch_size < 1) throw ConfigError("train: batch size must be >= 1");
  if (!(lr > 0.0)) throw ConfigError("train: learning rate must be positive");
  if (checkpoint_every < 1 || log_every < 1)
    throw ConfigError("train: cadences must be >= 1");
  if (strides.empty()) throw ConfigError("train: need at least one stride");
}

TrainResult train(const TrainRunConfig& run, const NetworkConfig& net,
                  const std::vector<MotionClip>& dataset, const TrainSinks& sinks,
                  std::optional<Checkpoint> resume_from) {
  run.validate();
  net.validate();
  if (dataset.empty()) throw EmptyDataset("train: no clips in dataset");

  Rng window_rng(Rng::mix(run.seed, kStreamWindows));
  const std::vector<TrainingWindow> windows =
      make_windows(dataset, run.sequence_length, run.strides, run.rotations_per_window,
                   window_rng);

  TrainResult result;
  std::uint64_t start_iteration = 0;
  if (resume_from) {
    if (resume_from->params.config != net)
      throw ArchMismatch("train: checkpoint architecture differs from requested network");
    result.params = std::move(resume_from->params);
    result.adam = std::move(resume_from->adam);
    result.adam.hyper.lr = run.lr;
    start_iteration = result.adam.step_count;
  } else {
    Rng init_rng(Rng::mix(run.seed, kStreamInit));
    result.params = init_params(net, init_rng);
    result.adam = AdamState::init(std::as_const(result.params).tensors(),
                                  AdamHyper{run.lr, 0.9, 0.999, 1e-8});
  }

  if (start_iteration == 0 && sinks.on_checkpoint)
    sinks.on_checkpoint(0, result.params, result.adam);

  std::vector<Tensor*> param_ptrs = result.params.tensors();
  Tape tape;

  for (std::uint64_t iter = start_iteration; iter < run.iterations; ++iter) {
    Rng batch_rng(Rng::mix(Rng::mix(run.seed, kStreamBatch), iter));
    std::vector<RepSequence> batch;
    batch.reserve(run.batch_size);
    for (std::size_t b = 0; b < run.batch_size; ++b) {
      const TrainingWindow& w = windows[batch_rng.below(windows.size())];
      batch.push_back(w.realize(dataset, run.sequence_length));
    }

    Rng mask_rng(Rng::mix(Rng::mix(run.seed, kStreamMask), iter));
    const ScheduleMask mask = build_schedule(run.schedule, run.sequence_length, &mask_rng);

    const SequenceResult step = train_sequence_on(tape, result.params, batch, mask, run.options);
    if (!std::isfinite(step.loss))
      throw NonFiniteError("train: loss diverged at iteration " + std::to_string(iter + 1));

    std::vector<const Tensor*> grad_ptrs;
    grad_ptrs.reserve(step.gradients.size());
    for (const Tensor& g : step.gradients) grad_ptrs.push_back(&g);
    adam_step(param_ptrs, grad_ptrs, result.adam);

    // Log rows depend only on the absolute iteration number, so resumed runs
    // reproduce the uninterrupted log byte for byte.
    const std::uint64_t done = iter + 1;
    if (done % run.log_every == 0) {
      result.loss_log.emplace_back(done, step.loss);
      if (sinks.on_log) sinks.on_log(done, step.loss);
    }
    if (sinks.on_checkpoint && (done % run.checkpoint_every == 0 || done == run.iterations))
      sinks.on_checkpoint(done, result.params, result.adam);
  }
  return result;
}

}  // namespace acrnn
