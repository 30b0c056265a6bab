#pragma once

#include <cstdint>
#include <vector>

#include "stresskit/types.hpp"

namespace stresskit {

struct WindowingReport {
  std::size_t merged_events = 0;
  std::size_t dropped_stress = 0;     // by coverage filter
  std::size_t dropped_nonstress = 0;  // by coverage filter
};

// One stress window [e.t - half_width, e.t + half_width) per retained
// event. Events closer than 2*half_width to the previously retained one
// merge into it (only the earlier is kept).
std::vector<Window> extract_stress_windows(const ParticipantRecord& record,
                                           WindowingReport& report,
                                           std::int64_t half_width = 30);

// Non-overlapping tiles of `length` seconds anchored at the first sample
// timestamp, skipping any tile that intersects a stress window. Tiles
// cover the sample span only: the last tile ends at or before
// last_sample_t + 1.
std::vector<Window> extract_nonstress_windows(
    const ParticipantRecord& record, const std::vector<Window>& stress_windows,
    std::int64_t length = 60);

// Retains windows with |samples| >= ceil(min_fraction * window_length).
// Drop counts are accumulated into the report per label.
std::vector<Window> coverage_filter(std::vector<Window> windows,
                                    WindowingReport& report,
                                    double min_fraction = 0.8);

}  // namespace stresskit
