#pragma once

// Straight-line, forward-only reimplementation of the stacked LSTM and the
// masked sequence loss, written directly from the gate equations with plain
// vectors. Deliberately shares no code with the tape or kernel paths; the
// trainer's loss must match it to 1e-12.

#include <cmath>
#include <vector>

#include "acrnn/network.hpp"
#include "acrnn/schedule.hpp"

namespace acrnn::testing {

struct OracleOutcome {
  double mean_loss = 0.0;
  std::vector<std::vector<double>> predictions;  // one per step
};

inline OracleOutcome forward_oracle(const NetworkParams& params,
                                    const std::vector<std::vector<double>>& window,
                                    const ScheduleMask& mask, bool loss_all_steps = true) {
  const NetworkConfig& config = params.config;
  const std::size_t hidden = config.hidden_size;
  const std::size_t dim = config.input_dim;

  std::vector<std::vector<double>> h(config.num_layers, std::vector<double>(hidden, 0.0));
  std::vector<std::vector<double>> c = h;

  auto affine = [](const Tensor& w, const Tensor& b, const std::vector<double>& z) {
    std::vector<double> out(w.cols());
    for (std::size_t j = 0; j < w.cols(); ++j) {
      double acc = 0.0;
      for (std::size_t i = 0; i < w.rows(); ++i) acc += z[i] * w.at(i, j);
      out[j] = acc + b[j];
    }
    return out;
  };

  OracleOutcome outcome;
  double total = 0.0;
  std::size_t scored = 0;
  std::vector<double> previous;

  for (std::size_t t = 0; t + 1 < window.size(); ++t) {
    const bool self_fed = mask.source[t] == StepSource::self_fed;
    std::vector<double> x = self_fed ? previous : window[t];

    for (std::size_t l = 0; l < config.num_layers; ++l) {
      const LstmLayerParams& layer = params.layers[l];
      std::vector<double> z = x;
      z.insert(z.end(), h[l].begin(), h[l].end());
      const auto pre_i = affine(layer.w_input, layer.b_input, z);
      const auto pre_f = affine(layer.w_forget, layer.b_forget, z);
      const auto pre_o = affine(layer.w_output, layer.b_output, z);
      const auto pre_g = affine(layer.w_candidate, layer.b_candidate, z);
      for (std::size_t j = 0; j < hidden; ++j) {
        const double gi = 1.0 / (1.0 + std::exp(-pre_i[j]));
        const double gf = 1.0 / (1.0 + std::exp(-pre_f[j]));
        const double go = 1.0 / (1.0 + std::exp(-pre_o[j]));
        const double gg = std::tanh(pre_g[j]);
        c[l][j] = gf * c[l][j] + gi * gg;
        h[l][j] = go * std::tanh(c[l][j]);
      }
      x = h[l];
    }

    std::vector<double> prediction = affine(params.w_proj, params.b_proj, x);
    if (loss_all_steps || !self_fed) {
      double step_loss = 0.0;
      for (std::size_t j = 0; j < dim; ++j) {
        const double d = prediction[j] - window[t + 1][j];
        step_loss += d * d;
      }
      total += step_loss;
      ++scored;
    }
    outcome.predictions.push_back(prediction);
    previous = std::move(prediction);
  }
  outcome.mean_loss = total / static_cast<double>(scored);
  return outcome;
}

inline std::vector<std::vector<double>> flatten_window(const RepSequence& window) {
  std::vector<std::vector<double>> out;
  out.reserve(window.size());
  for (const RepresentationFrame& f : window) out.push_back(f.flatten());
  return out;
}

}  // namespace acrnn::testing
