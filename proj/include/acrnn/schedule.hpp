#pragma once

#include <cstdint>
#include <vector>

#include "acrnn/rng.hpp"

namespace acrnn {

enum class StepSource : std::uint8_t { ground_truth, self_fed };

enum class ScheduleMode : std::uint8_t { auto_conditioned, vanilla, scheduled_sampling };

// Training input schedule. auto_conditioned alternates u ground-truth steps
// with v self-fed steps; vanilla is plain teacher forcing (identical to
// auto_conditioned with v = 0); scheduled_sampling feeds the network its own
// output stochastically per step with probability p instead of in blocks.
struct ScheduleSpec {
  ScheduleMode mode = ScheduleMode::auto_conditioned;
  std::size_t ground_truth_len = 5;  // u
  std::size_t condition_len = 5;     // v
  double self_feed_prob = 0.5;       // p, scheduled_sampling only

  void validate() const;
};

// Per-timestep source flags plus k, the number of consecutive self-fed steps
// since the last ground-truth injection (0 at ground-truth steps). For
// auto_conditioned masks k never exceeds the condition length.
struct ScheduleMask {
  std::vector<StepSource> source;
  std::vector<std::size_t> steps_since_ground_truth;

  std::size_t length() const { return source.size(); }
  std::size_t self_fed_count() const;
};

// rng is only consumed in scheduled_sampling mode (one draw per step after
// the first) and may be null otherwise.
ScheduleMask build_schedule(const ScheduleSpec& spec, std::size_t length, Rng* rng = nullptr);

}  // namespace acrnn
