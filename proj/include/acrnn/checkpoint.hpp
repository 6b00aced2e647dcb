#pragma once

#include <string>

#include "acrnn/adam.hpp"
#include "acrnn/network.hpp"

namespace acrnn {

struct Checkpoint {
  NetworkParams params;
  AdamState adam;
};

// Binary layout, little-endian, no padding:
//   magic "ACRN", version u32
//   config: input_dim u32, hidden_size u32, num_layers u32
//   adam: step_count u64, lr f64, beta1 f64, beta2 f64, epsilon f64
//   parameter tensors in NetworkParams::tensors() order,
//   then the Adam first moments, then the second moments, each tensor as
//   rank u32, extents u64 per axis, f64 data.
void save_checkpoint(const NetworkParams& params, const AdamState& adam, const std::string& path);

Checkpoint load_checkpoint(const std::string& path);

}  // namespace acrnn
