#pragma once

#include <cstdint>
#include <vector>

#include "stresskit/types.hpp"

namespace stresskit {

// Knobs of the synthetic cohort generator. The three stress effect sizes
// target exactly the features the detector is expected to surface:
// delta_std_hr and delta_min_hr shape the heart-rate channel, and
// acc_burst_amp shapes the hand-acceleration channel. Setting all three
// to zero produces stress windows statistically identical to the rest of
// the recording.
struct CohortConfig {
  int n_participants = 12;
  double days = 2.0 / 24.0;      // recording span per participant
  double events_per_day = 96.0;  // Poisson rate of self-reported events
  double baseline_hr_mean = 75.0;
  double baseline_hr_sd = 1.0;   // spread of per-participant resting rates

  // Approximate extra within-window heart-rate standard deviation (bpm)
  // during stress, injected as a zero-mean spiky modulation whose peaks
  // stay inside the baseline bump envelope.
  double delta_std_hr = 6.0;
  // Strength of transient-dip suppression during stress (bpm of dip
  // depth removed; 10 removes the dips entirely), which raises the
  // windowed minimum heart rate.
  double delta_min_hr = 10.0;
  // Standard deviation (m/s^2) of the bounded stress tremor along the
  // gravity axis; raises the windowed acceleration-magnitude standard
  // deviation while staying inside the steady hand-jerk envelope.
  double acc_burst_amp = 0.35;

  std::uint64_t seed = 0;
};

// Throws config_error when counts are non-positive, rates or effect
// sizes are negative, or any field is non-finite.
void validate(const CohortConfig& config);

// Fully seeded generation: per-participant streams come from sub-seeds
// derived from the master seed, so records are independent of generation
// order and byte-identical across runs.
std::vector<ParticipantRecord> generate_cohort(const CohortConfig& config);

}  // namespace stresskit
