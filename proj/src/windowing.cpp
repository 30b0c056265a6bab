#include "stresskit/windowing.hpp"

#include <algorithm>
#include <cmath>

#include "stresskit/error.hpp"

namespace stresskit {

namespace {

// Samples are sorted by t, so each window is one contiguous range.
std::vector<SensorSample> samples_in(const std::vector<SensorSample>& samples,
                                     std::int64_t start_t, std::int64_t end_t) {
  const auto lo = std::lower_bound(
      samples.begin(), samples.end(), start_t,
      [](const SensorSample& s, std::int64_t t) { return s.t < t; });
  const auto hi = std::lower_bound(
      lo, samples.end(), end_t,
      [](const SensorSample& s, std::int64_t t) { return s.t < t; });
  return std::vector<SensorSample>(lo, hi);
}

bool intersects(std::int64_t a_start, std::int64_t a_end, std::int64_t b_start,
                std::int64_t b_end) {
  return a_start < b_end && b_start < a_end;
}

}  // namespace

std::vector<Window> extract_stress_windows(const ParticipantRecord& record,
                                           WindowingReport& report,
                                           std::int64_t half_width) {
  if (half_width <= 0) throw error("extract_stress_windows: half_width must be > 0");

  std::vector<Window> windows;
  bool have_last = false;
  std::int64_t last_retained_t = 0;
  for (const auto& event : record.events) {
    if (have_last && event.t - last_retained_t < 2 * half_width) {
      ++report.merged_events;
      continue;
    }
    Window w;
    w.participant_id = record.id;
    w.start_t = event.t - half_width;
    w.end_t = event.t + half_width;
    w.label = Label::stress;
    w.samples = samples_in(record.samples, w.start_t, w.end_t);
    windows.push_back(std::move(w));
    last_retained_t = event.t;
    have_last = true;
  }
  return windows;
}

std::vector<Window> extract_nonstress_windows(
    const ParticipantRecord& record, const std::vector<Window>& stress_windows,
    std::int64_t length) {
  std::vector<Window> windows;
  if (record.samples.empty()) return windows;

  const std::int64_t first_t = record.samples.front().t;
  const std::int64_t span_end = record.samples.back().t + 1;
  for (std::int64_t start = first_t; start + length <= span_end;
       start += length) {
    const std::int64_t end = start + length;
    bool blocked = false;
    for (const auto& sw : stress_windows) {
      if (intersects(start, end, sw.start_t, sw.end_t)) {
        blocked = true;
        break;
      }
    }
    if (blocked) continue;
    Window w;
    w.participant_id = record.id;
    w.start_t = start;
    w.end_t = end;
    w.label = Label::nonstress;
    w.samples = samples_in(record.samples, start, end);
    windows.push_back(std::move(w));
  }
  return windows;
}

std::vector<Window> coverage_filter(std::vector<Window> windows,
                                    WindowingReport& report,
                                    double min_fraction) {
  if (!(min_fraction > 0.0 && min_fraction <= 1.0)) {
    throw error("coverage_filter: min_fraction must be in (0, 1]");
  }
  std::vector<Window> kept;
  kept.reserve(windows.size());
  for (auto& w : windows) {
    const auto required = static_cast<std::size_t>(
        std::ceil(min_fraction * static_cast<double>(w.length())));
    if (w.samples.size() >= required) {
      kept.push_back(std::move(w));
    } else if (w.label == Label::stress) {
      ++report.dropped_stress;
    } else {
      ++report.dropped_nonstress;
    }
  }
  return kept;
}

}  // namespace stresskit
