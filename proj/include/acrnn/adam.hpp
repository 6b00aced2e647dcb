#pragma once

#include <cstdint>
#include <vector>

#include "acrnn/tensor.hpp"

namespace acrnn {

struct AdamHyper {
  double lr = 0.0001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Bias-corrected ADAM. One state covers an ordered list of parameter tensors.
struct AdamState {
  AdamHyper hyper;
  std::uint64_t step_count = 0;
  std::vector<Tensor> first_moment;   // m, one per parameter
  std::vector<Tensor> second_moment;  // s, one per parameter

  static AdamState init(const std::vector<const Tensor*>& params, AdamHyper hyper);
};

// params[i] <- params[i] - lr * m_hat / (sqrt(s_hat) + eps). Increments the
// step count once per call.
void adam_step(const std::vector<Tensor*>& params, const std::vector<const Tensor*>& grads,
               AdamState& state);

}  // namespace acrnn
