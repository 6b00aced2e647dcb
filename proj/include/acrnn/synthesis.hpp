#pragma once

#include <memory>

#include "acrnn/network.hpp"
#include "acrnn/representation.hpp"

namespace acrnn {

// Autoregressive frame source. Abstract so evaluation can swap in oracle
// stubs (ground-truth replay, constant offsets) for the real network.
class Stepper {
 public:
  virtual ~Stepper() = default;
  virtual void reset() = 0;
  // Feeds one representation frame, returns the predicted next frame.
  virtual std::vector<double> step(const std::vector<double>& frame) = 0;
};

class NetworkStepper final : public Stepper {
 public:
  explicit NetworkStepper(const NetworkParams& params)
      : params_(&params), memory_(NetworkMemory::zeros(params.config, 1)) {}

  void reset() override { memory_ = NetworkMemory::zeros(params_->config, 1); }

  std::vector<double> step(const std::vector<double>& frame) override {
    return network_step(*params_, memory_, frame);
  }

 private:
  const NetworkParams* params_;
  NetworkMemory memory_;
};

struct SynthesisRequest {
  RepSequence seed_frames;  // >= 1 frame; 10 is the usual seed
  std::size_t n_generate = 0;
  Vec3 initial_root;
};

// Primes the stepper with the seed frames, then feeds each prediction back in
// for n_generate steps. Returns seed + generated frames. Throws
// DivergenceError (with the offending output frame index) on non-finite
// output.
RepSequence generate_representation(Stepper& stepper, const RepSequence& seed,
                                    std::size_t n_generate);

// Full-pipeline flavor: representation in, absolute-position clip out.
MotionClip synthesize(const NetworkParams& params, const SynthesisRequest& request,
                      std::shared_ptr<const Skeleton> skeleton, double fps);

}  // namespace acrnn
