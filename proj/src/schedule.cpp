#include "acrnn/schedule.hpp"

#include "acrnn/errors.hpp"

namespace acrnn {

void ScheduleSpec::validate() const {
  switch (mode) {
    case ScheduleMode::auto_conditioned:
      if (ground_truth_len < 1)
        throw ConfigError("schedule: ground-truth length u must be >= 1");
      break;
    case ScheduleMode::vanilla:
      break;
    case ScheduleMode::scheduled_sampling:
      if (!(self_feed_prob >= 0.0 && self_feed_prob <= 1.0))
        throw ConfigError("schedule: sampling probability must be in [0, 1]");
      break;
  }
}

std::size_t ScheduleMask::self_fed_count() const {
  std::size_t n = 0;
  for (StepSource s : source)
    if (s == StepSource::self_fed) ++n;
  return n;
}

ScheduleMask build_schedule(const ScheduleSpec& spec, std::size_t length, Rng* rng) {
  spec.validate();
  if (length < 1) throw ContractError("build_schedule: length must be >= 1");

  ScheduleMask mask;
  mask.source.resize(length, StepSource::ground_truth);
  mask.steps_since_ground_truth.resize(length, 0);

  switch (spec.mode) {
    case ScheduleMode::vanilla:
      break;
    case ScheduleMode::auto_conditioned: {
      const std::size_t u = spec.ground_truth_len;
      const std::size_t v = spec.condition_len;
      if (v == 0) break;  // pure teacher forcing
      const std::size_t block = u + v;
      for (std::size_t t = 0; t < length; ++t) {
        const std::size_t phase = t % block;
        if (phase >= u) {
          mask.source[t] = StepSource::self_fed;
          mask.steps_since_ground_truth[t] = phase - u + 1;
        }
      }
      break;
    }
    case ScheduleMode::scheduled_sampling: {
      if (!rng) throw ContractError("build_schedule: scheduled sampling needs an rng");
      std::size_t k = 0;
      for (std::size_t t = 1; t < length; ++t) {
        if (rng->bernoulli(spec.self_feed_prob)) {
          mask.source[t] = StepSource::self_fed;
          mask.steps_since_ground_truth[t] = ++k;
        } else {
          k = 0;
        }
      }
      break;
    }
  }
  return mask;
}

}  // namespace acrnn
