#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace stresskit {

// One 1 Hz reading from the wrist sensor.
struct SensorSample {
  std::int64_t t = 0;  // unix seconds
  double hr = 0.0;     // beats per minute, >= 0
  double ax = 0.0, ay = 0.0, az = 0.0;  // hand acceleration, m/s^2

  bool operator==(const SensorSample&) const = default;
};

// A time-stamped self-report tap; the ground-truth stress anchor.
struct StressEvent {
  std::int64_t t = 0;

  bool operator==(const StressEvent&) const = default;
};

struct ParticipantRecord {
  std::string id;
  std::vector<SensorSample> samples;  // sorted strictly ascending by t
  std::vector<StressEvent> events;    // sorted by t

  bool operator==(const ParticipantRecord&) const = default;
};

enum class Label : int { nonstress = 0, stress = 1 };

inline int label_value(Label l) { return static_cast<int>(l); }

// A 60-second slice of samples with a fixed label.
struct Window {
  std::string participant_id;
  std::int64_t start_t = 0;
  std::int64_t end_t = 0;  // samples satisfy start_t <= t < end_t
  Label label = Label::nonstress;
  std::vector<SensorSample> samples;

  std::int64_t length() const { return end_t - start_t; }
};

inline constexpr std::size_t kNumFeatures = 10;

// Column indices of the serialized feature matrix. The order is a fixed
// contract shared by models, model files, and the SHAP exports.
namespace feat {
inline constexpr std::size_t mean_hr = 0;
inline constexpr std::size_t max_hr = 1;
inline constexpr std::size_t min_hr = 2;
inline constexpr std::size_t std_hr = 3;
inline constexpr std::size_t range_hr = 4;
inline constexpr std::size_t mean_acc = 5;
inline constexpr std::size_t max_acc = 6;
inline constexpr std::size_t min_acc = 7;
inline constexpr std::size_t std_acc = 8;
inline constexpr std::size_t range_acc = 9;
}  // namespace feat

const std::array<std::string, kNumFeatures>& feature_names();

// One model-input row: the ten time-domain features plus provenance.
struct FeatureVector {
  std::string participant_id;
  Label label = Label::nonstress;
  std::array<double, kNumFeatures> v{};

  bool operator==(const FeatureVector&) const = default;
};

}  // namespace stresskit
