#pragma once

#include <functional>
#include <optional>

#include "acrnn/adam.hpp"
#include "acrnn/checkpoint.hpp"
#include "acrnn/network.hpp"
#include "acrnn/schedule.hpp"
#include "acrnn/windows.hpp"

namespace acrnn {

struct TrainOptions {
  // Score every timestep against the next ground-truth frame. When false,
  // only ground-truth-fed steps contribute to the loss.
  bool loss_all_steps = true;
  // Detach self-fed inputs instead of backpropagating through them
  // (ablation; the default differentiates through the whole chain).
  bool stop_gradient = false;
  // Instrumentation: sees the tensor actually fed at each step.
  std::function<void(std::size_t step, bool self_fed, const Tensor& input,
                     const Tensor& prediction)>
      probe;
};

// One scored step: runs the network on input_var, scores the prediction
// against target. The code path is identical whether input_var holds ground
// truth or the previous prediction; that choice is the caller's.
struct StepLoss {
  Var loss;        // scalar ||prediction - target||^2
  Var prediction;  // [batch, D]
};
StepLoss step_loss(Tape& tape, const NetworkConfig& config, const ParamVars& params,
                   MemoryVars& memory, Var input_var, const Tensor& target);

struct SequenceResult {
  double loss = 0.0;             // mean over scored steps and batch rows
  std::vector<Tensor> gradients;  // NetworkParams::tensors() order
};

// Unrolls one batch of equally masked sequences, feeding ground truth or the
// previous prediction per mask step, and backpropagates through the whole
// unrolled graph (including through self-fed inputs unless stop_gradient).
// Sequences must share the mask's length; memory starts zeroed.
SequenceResult train_sequence(const NetworkParams& params,
                              const std::vector<RepSequence>& batch, const ScheduleMask& mask,
                              const TrainOptions& options = {});

// Same, recording on a caller-owned tape (reset here) so a training loop can
// reuse its buffers across iterations.
SequenceResult train_sequence_on(Tape& tape, const NetworkParams& params,
                                 const std::vector<RepSequence>& batch, const ScheduleMask& mask,
                                 const TrainOptions& options = {});

SequenceResult train_sequence(const NetworkParams& params, const RepSequence& window,
                              const ScheduleMask& mask, const TrainOptions& options = {});

struct TrainRunConfig {
  ScheduleSpec schedule;
  std::size_t sequence_length = 100;
  std::size_t batch_size = 32;
  std::uint64_t iterations = 10000;
  double lr = 0.0001;
  std::uint64_t seed = 0;
  std::uint64_t checkpoint_every = 1000;
  std::uint64_t log_every = 1;
  std::vector<std::size_t> strides = {1, 2, 3};
  std::size_t rotations_per_window = 1;
  TrainOptions options;

  void validate() const;
};

struct TrainSinks {
  std::function<void(std::uint64_t iteration, double loss)> on_log;
  std::function<void(std::uint64_t iteration, const NetworkParams&, const AdamState&)>
      on_checkpoint;
};

struct TrainResult {
  NetworkParams params;
  AdamState adam;
  std::vector<std::pair<std::uint64_t, double>> loss_log;
};

// Deterministic training loop: all randomness is derived from (seed, purpose,
// iteration), so a resumed run continues bit-identically. Each iteration
// samples batch_size windows (one shared schedule mask, independent
// memories), averages gradients via the mean loss, and takes one ADAM step.
// resume_from supplies params and Adam state; its step count is the first
// iteration to run. Checkpoints fire at iteration 0 (initial), every
// checkpoint_every iterations, and at the end.
TrainResult train(const TrainRunConfig& run, const NetworkConfig& net,
                  const std::vector<MotionClip>& dataset, const TrainSinks& sinks = {},
                  std::optional<Checkpoint> resume_from = std::nullopt);

}  // namespace acrnn
