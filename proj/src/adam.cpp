#include "acrnn/adam.hpp"

#include <cmath>

namespace acrnn {

AdamState AdamState::init(const std::vector<const Tensor*>& params, AdamHyper hyper) {
  AdamState state;
  state.hyper = hyper;
  state.first_moment.reserve(params.size());
  state.second_moment.reserve(params.size());
  for (const Tensor* p : params) {
    state.first_moment.emplace_back(Tensor::zeros(p->shape()));
    state.second_moment.emplace_back(Tensor::zeros(p->shape()));
  }
  return state;
}

void adam_step(const std::vector<Tensor*>& params, const std::vector<const Tensor*>& grads,
               AdamState& state) {
  if (params.size() != grads.size() || params.size() != state.first_moment.size())
    throw ShapeError("adam_step: parameter/gradient/state count mismatch");

  state.step_count += 1;
  const AdamHyper& h = state.hyper;
  const double m_corr = 1.0 - std::pow(h.beta1, static_cast<double>(state.step_count));
  const double s_corr = 1.0 - std::pow(h.beta2, static_cast<double>(state.step_count));

  for (std::size_t i = 0; i < params.size(); ++i) {
    Tensor& p = *params[i];
    const Tensor& g = *grads[i];
    Tensor& m = state.first_moment[i];
    Tensor& s = state.second_moment[i];
    if (!p.same_shape(g) || !p.same_shape(m))
      throw ShapeError("adam_step: shape mismatch at parameter " + std::to_string(i) + ": " +
                       shape_pair(p, g));
    for (std::size_t j = 0; j < p.size(); ++j) {
      m[j] = h.beta1 * m[j] + (1.0 - h.beta1) * g[j];
      s[j] = h.beta2 * s[j] + (1.0 - h.beta2) * g[j] * g[j];
      const double m_hat = m[j] / m_corr;
      const double s_hat = s[j] / s_corr;
      p[j] -= h.lr * m_hat / (std::sqrt(s_hat) + h.epsilon);
    }
  }
}

}  // namespace acrnn
