#pragma once

#include <vector>

#include "acrnn/rng.hpp"
#include "acrnn/tape.hpp"
#include "acrnn/tensor.hpp"

namespace acrnn {

// Stacked LSTM: num_layers recurrent layers feeding a linear readout back to
// the input dimension, so predictions can be fed straight back in.
struct NetworkConfig {
  std::size_t input_dim = 0;     // D = 3 * joint count
  std::size_t hidden_size = 128;
  std::size_t num_layers = 3;

  std::size_t output_dim() const { return input_dim; }
  void validate() const;
  bool operator==(const NetworkConfig&) const = default;
};

// Gate weights act on [x ; h], the concat of the layer input and the previous
// hidden state.
struct LstmLayerParams {
  Tensor w_input, b_input;
  Tensor w_forget, b_forget;
  Tensor w_output, b_output;
  Tensor w_candidate, b_candidate;
};

struct NetworkParams {
  NetworkConfig config;
  std::vector<LstmLayerParams> layers;
  Tensor w_proj;  // [hidden, D]
  Tensor b_proj;  // [D]

  // Fixed tensor order used everywhere (checkpoints, Adam moments, gradient
  // lists): per layer wi, bi, wf, bf, wo, bo, wg, bg; then w_proj, b_proj.
  std::vector<Tensor*> tensors();
  std::vector<const Tensor*> tensors() const;

  void validate() const;
};

// Recurrent state m_t: per-layer hidden and cell tensors, zeroed at sequence
// start. Batch dimension is the row count.
struct NetworkMemory {
  std::vector<Tensor> hidden;
  std::vector<Tensor> cell;

  static NetworkMemory zeros(const NetworkConfig& config, std::size_t batch);
};

// Weights uniform in (-a, a) with a = sqrt(6 / (fan_in + fan_out)); forget
// biases start at 1, every other bias at 0. Deterministic per rng seed.
NetworkParams init_params(const NetworkConfig& config, Rng& rng);

// One plain (tape-free) cell step. x [b, in], h/c [b, hidden].
void lstm_cell_step(const Tensor& x, const Tensor& h, const Tensor& c,
                    const LstmLayerParams& params, Tensor& h_out, Tensor& c_out);

// One plain network step over a batch: runs the layers bottom-up, updates
// memory in place, returns the readout [b, D].
Tensor network_step(const NetworkParams& params, NetworkMemory& memory, const Tensor& input);

// Single-frame flavor.
std::vector<double> network_step(const NetworkParams& params, NetworkMemory& memory,
                                 const std::vector<double>& frame);

// --- tape-recorded forward (training path) ---------------------------------

struct LayerVars {
  Var w_input, b_input, w_forget, b_forget, w_output, b_output, w_candidate, b_candidate;
};

struct ParamVars {
  std::vector<LayerVars> layers;
  Var w_proj, b_proj;

  std::vector<Var> ordered() const;  // same fixed order as NetworkParams::tensors
};

struct MemoryVars {
  std::vector<Var> hidden;
  std::vector<Var> cell;
};

ParamVars insert_params(Tape& tape, const NetworkParams& params);
MemoryVars insert_zero_memory(Tape& tape, const NetworkConfig& config, std::size_t batch);

// Identical math to network_step, recorded on the tape (same kernels, same
// order, bit-identical values).
Var network_step_tape(Tape& tape, const NetworkConfig& config, const ParamVars& params,
                      MemoryVars& memory, Var input);

}  // namespace acrnn
