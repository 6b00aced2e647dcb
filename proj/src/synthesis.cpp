#include "acrnn/synthesis.hpp"

#include <cmath>

#include "acrnn/errors.hpp"

namespace acrnn {

namespace {

bool finite_vector(const std::vector<double>& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

}  // namespace

RepSequence generate_representation(Stepper& stepper, const RepSequence& seed,
                                    std::size_t n_generate) {
  if (seed.empty()) throw ContractError("synthesize: need at least one seed frame");
  stepper.reset();

  RepSequence out;
  out.reserve(seed.size() + n_generate);

  std::vector<double> prediction;
  for (const RepresentationFrame& frame : seed) {
    prediction = stepper.step(frame.flatten());
    out.push_back(frame);
  }
  for (std::size_t k = 0; k < n_generate; ++k) {
    if (!finite_vector(prediction))
      throw DivergenceError(out.size(), "synthesize: non-finite prediction");
    out.push_back(RepresentationFrame::unflatten(prediction));
    if (k + 1 < n_generate) prediction = stepper.step(prediction);
  }
  return out;
}

MotionClip synthesize(const NetworkParams& params, const SynthesisRequest& request,
                      std::shared_ptr<const Skeleton> skeleton, double fps) {
  if (request.seed_frames.empty())
    throw ContractError("synthesize: need at least one seed frame");
  const std::size_t dim = request.seed_frames.front().dim();
  if (dim != params.config.input_dim)
    throw ShapeError("synthesize: seed dim " + std::to_string(dim) +
                     " does not match checkpoint D=" + std::to_string(params.config.input_dim));
  if (skeleton && 3 * skeleton->joint_count() != dim)
    throw ShapeError("synthesize: skeleton has " + std::to_string(skeleton->joint_count()) +
                     " joints, seed dim is " + std::to_string(dim));

  NetworkStepper stepper(params);
  const RepSequence rep =
      generate_representation(stepper, request.seed_frames, request.n_generate);
  return from_representation(rep, request.initial_root, std::move(skeleton), fps);
}

}  // namespace acrnn
