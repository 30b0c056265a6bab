#include "stresskit/synth.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "stresskit/error.hpp"
#include "stresskit/rng.hpp"

namespace stresskit {
namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kGravity = 9.81;
constexpr std::int64_t kEpochBase = 1700000000;  // arbitrary fixed origin

double clamp01(double value) { return std::clamp(value, 0.0, 1.0); }

// A train of short rectangular excursions: value[t] is the excursion
// height at sample t (0 when quiescent). Two arrival flavors:
//  - poisson: exponential gaps; long recordings contain stretches with
//    none, so windowed statistics that depend on them stay noisy.
//  - steady: gaps uniform in [gap_lo, gap_hi]; every 60 s window is
//    guaranteed at least floor(60 / gap_hi) excursions, which pins the
//    windowed extremes to the excursion envelope everywhere.
struct ExcursionTrain {
  std::vector<double> value;

  ExcursionTrain(std::int64_t span) : value(static_cast<std::size_t>(span)) {}

  static ExcursionTrain poisson(std::int64_t span, Rng& rng,
                                double rate_per_second, int max_width,
                                double lo, double hi) {
    ExcursionTrain train(span);
    if (rate_per_second <= 0.0) return train;
    double t = rng.next_exponential() / rate_per_second;
    while (t < static_cast<double>(span)) {
      const auto start = static_cast<std::int64_t>(t);
      const std::int64_t width =
          1 + static_cast<std::int64_t>(rng.next_below(
                  static_cast<std::uint64_t>(max_width)));
      train.stamp(start, width, rng.next_uniform(lo, hi));
      t += rng.next_exponential() / rate_per_second;
    }
    return train;
  }

  static ExcursionTrain steady(std::int64_t span, Rng& rng, double gap_lo,
                               double gap_hi, double lo, double hi,
                               bool alternating_sign) {
    ExcursionTrain train(span);
    double t = rng.next_uniform(0.0, gap_hi);
    double sign = !alternating_sign || rng.next_below(2) == 0 ? 1.0 : -1.0;
    while (t < static_cast<double>(span)) {
      train.stamp(static_cast<std::int64_t>(t), 1,
                  sign * rng.next_uniform(lo, hi));
      if (alternating_sign) sign = -sign;
      t += rng.next_uniform(gap_lo, gap_hi);
    }
    return train;
  }

  // Steady excursions whose height scale drifts between regimes while the
  // gap shrinks with the square of the scale. Rate times squared height
  // is regime-invariant, so the train's contribution to a window's
  // standard deviation stays fixed while the window's peak swings with
  // the regime — extremes vary where spread does not.
  static ExcursionTrain regimes(std::int64_t span, Rng& rng, double gap_lo,
                                double gap_hi, double lo, double hi,
                                double alt_scale) {
    ExcursionTrain train(span);
    double scale = rng.next_below(2) == 0 ? 1.0 : alt_scale;
    double regime_end = rng.next_uniform(180.0, 400.0);
    double t = rng.next_uniform(0.0, gap_hi);
    while (t < static_cast<double>(span)) {
      if (t >= regime_end) {
        scale = scale == 1.0 ? alt_scale : 1.0;
        regime_end = t + rng.next_uniform(180.0, 400.0);
      }
      train.stamp(static_cast<std::int64_t>(t), 1,
                  scale * rng.next_uniform(lo, hi));
      t += scale * scale * rng.next_uniform(gap_lo, gap_hi);
    }
    return train;
  }

  void stamp(std::int64_t start, std::int64_t width, double height) {
    const auto span = static_cast<std::int64_t>(value.size());
    for (std::int64_t k = start; k < std::min(start + width, span); ++k) {
      value[static_cast<std::size_t>(k)] += height;
    }
  }

  bool quiet(std::int64_t t) const {
    return value[static_cast<std::size_t>(t)] == 0.0;
  }
};

ParticipantRecord generate_participant(const CohortConfig& config,
                                       const std::string& id,
                                       std::uint64_t seed) {
  const auto span =
      static_cast<std::int64_t>(std::llround(config.days * 86400.0));
  Rng rng(seed);
  ParticipantRecord record;
  record.id = id;

  // Participant-level constants.
  const double resting_hr =
      config.baseline_hr_mean + config.baseline_hr_sd * rng.next_normal();
  double gx = 0.0, gy = 0.0, gz = 0.0;
  do {
    gx = rng.next_normal();
    gy = rng.next_normal();
    gz = rng.next_normal();
  } while (gx * gx + gy * gy + gz * gz < 1e-6);
  const double gnorm = std::sqrt(gx * gx + gy * gy + gz * gz);
  gx /= gnorm;
  gy /= gnorm;
  gz /= gnorm;

  // Slow heart-rate wander: two incommensurate sinusoids.
  const double period1 = rng.next_uniform(600.0, 1200.0);
  const double phase1 = rng.next_uniform(0.0, 2.0 * kPi);
  const double period2 = rng.next_uniform(180.0, 420.0);
  const double phase2 = rng.next_uniform(0.0, 2.0 * kPi);

  // Mean-reverting fast component: AR(1) with persistence 0.85.
  const double ar_coef = 0.85;
  const double innovation_sd = 0.8;
  const double stationary_sd =
      innovation_sd / std::sqrt(1.0 - ar_coef * ar_coef);
  std::vector<double> ar(static_cast<std::size_t>(span));
  ar[0] = stationary_sd * rng.next_normal();
  for (std::int64_t t = 1; t < span; ++t) {
    ar[static_cast<std::size_t>(t)] =
        ar_coef * ar[static_cast<std::size_t>(t - 1)] +
        innovation_sd * rng.next_normal();
  }

  // Baseline texture. All three excursion trains recur steadily, so in
  // every 60 s window the extremes sit on the excursion envelope: bumps
  // pin the heart-rate maximum, dips the minimum, and sign-alternating
  // hand jerks both acceleration extremes. An uneventful stretch never
  // occurs, which keeps windowed extremes uninformative at baseline.
  const ExcursionTrain dips =
      ExcursionTrain::steady(span, rng, 45.0, 58.0, -18.5, -17.5, false);
  const ExcursionTrain bumps =
      ExcursionTrain::regimes(span, rng, 12.0, 28.0, 1.0, 25.0, 0.75);
  const ExcursionTrain jerks =
      ExcursionTrain::steady(span, rng, 8.0, 25.0, 1.5, 1.8, true);

  // Self-report events: Poisson arrivals kept a window half-width away
  // from both ends of the recording. Each event carries a response
  // profile — motor tremor, cardiac jitter, dip suppression, or all
  // three — so no single feature can explain every stress window and
  // each targeted feature owns a share of windows only it separates.
  const double event_rate = config.events_per_day / 86400.0;
  const double last_valid = static_cast<double>(span) - 30.0;
  std::vector<bool> jittery(static_cast<std::size_t>(span), false);
  std::vector<bool> dipless(static_cast<std::size_t>(span), false);
  std::vector<bool> tremory(static_cast<std::size_t>(span), false);
  if (event_rate > 0.0) {
    double t = 30.0 + rng.next_exponential() / event_rate;
    std::size_t ordinal = 0;
    while (t < last_valid) {
      record.events.push_back({kEpochBase + static_cast<std::int64_t>(t)});
      // Episodes cycle through four response profiles instead of drawing
      // them independently, so every participant carries the same mix and
      // small cohorts do not skew toward one physiological signature.
      const std::size_t kind = ordinal++ % 4;
      const bool all = kind == 3;
      const std::int64_t center = static_cast<std::int64_t>(t);
      const std::int64_t lo = std::max<std::int64_t>(0, center - 30);
      const std::int64_t hi = std::min<std::int64_t>(span, center + 30);
      for (std::int64_t s = lo; s < hi; ++s) {
        const auto i = static_cast<std::size_t>(s);
        if (kind == 0 || all) tremory[i] = true;
        if (kind == 1 || all) jittery[i] = true;
        if (kind == 2 || all) dipless[i] = true;
      }
      t += rng.next_exponential() / event_rate;
    }
  }

  const double dip_suppression = clamp01(config.delta_min_hr / 10.0);
  // Stress waveform: one second in five jumps up 6..10, the rest sag
  // 1.5..2.5, all scaled by `gain`. The mix has zero mean and unit-scale
  // standard deviation 7/sqrt(3), so the observed extra standard
  // deviation tracks delta_std_hr while the waveform peak stays at or
  // below the steady bump envelope.
  const double waveform_gain =
      config.delta_std_hr * std::sqrt(3.0) / 7.0;
  // Stress tremor: bounded uniform vibration along gravity. Standard
  // deviation acc_burst_amp means half-width sqrt(3) * acc_burst_amp,
  // which stays below the 1.5 jerk floor for amplitudes up to ~0.86.
  const double tremor_halfwidth = config.acc_burst_amp * std::sqrt(3.0);

  record.samples.resize(static_cast<std::size_t>(span));

  // Heart-rate channel. The stress modulation touches only quiescent
  // samples: excursion peaks stay exactly on the baseline envelope.
  for (std::int64_t t = 0; t < span; ++t) {
    const auto i = static_cast<std::size_t>(t);
    const double wander =
        1.6 * std::sin(2.0 * kPi * static_cast<double>(t) / period1 + phase1) +
        1.0 * std::sin(2.0 * kPi * static_cast<double>(t) / period2 + phase2);
    // A dip wins the sample outright: a coincident bump must not cancel
    // it, or the windowed minimum turns bimodal at baseline.
    const double excursion =
        !dips.quiet(t)
            ? dips.value[i] * (dipless[i] ? 1.0 - dip_suppression : 1.0)
            : bumps.value[i];
    double hr = resting_hr + wander + ar[i] + excursion;
    if (jittery[i] && bumps.quiet(t) && dips.quiet(t)) {
      const double spike = rng.next_double() < 0.2
                               ? rng.next_uniform(6.0, 10.0)
                               : -rng.next_uniform(1.5, 2.5);
      hr += waveform_gain * spike;
    }
    record.samples[i].t = kEpochBase + t;
    record.samples[i].hr = std::max(hr, 30.0);
  }

  // Acceleration channel: gravity along a fixed wearing posture, small
  // sensor noise, steady hand jerks, and a stress tremor that pauses
  // while a jerk is in progress so the extremes keep the jerk envelope.
  for (std::int64_t t = 0; t < span; ++t) {
    const auto i = static_cast<std::size_t>(t);
    double along = kGravity + jerks.value[i];
    if (tremory[i] && jerks.quiet(t)) {
      along += rng.next_uniform(-tremor_halfwidth, tremor_halfwidth);
    }
    record.samples[i].ax = along * gx + 0.08 * rng.next_normal();
    record.samples[i].ay = along * gy + 0.08 * rng.next_normal();
    record.samples[i].az = along * gz + 0.08 * rng.next_normal();
  }

  return record;
}

}  // namespace

void validate(const CohortConfig& config) {
  const auto require = [](bool ok, const char* message) {
    if (!ok) throw config_error(message);
  };
  require(config.n_participants >= 1,
          "cohort config: n_participants must be at least 1");
  require(std::isfinite(config.days) && config.days > 0.0,
          "cohort config: days must be positive");
  require(std::llround(config.days * 86400.0) >= 120,
          "cohort config: recording span must be at least 120 seconds");
  require(std::isfinite(config.events_per_day) && config.events_per_day >= 0.0,
          "cohort config: events_per_day must be non-negative");
  require(std::isfinite(config.baseline_hr_mean) &&
              config.baseline_hr_mean > 0.0,
          "cohort config: baseline_hr_mean must be positive");
  require(std::isfinite(config.baseline_hr_sd) && config.baseline_hr_sd >= 0.0,
          "cohort config: baseline_hr_sd must be non-negative");
  require(std::isfinite(config.delta_std_hr) && config.delta_std_hr >= 0.0,
          "cohort config: delta_std_hr must be non-negative");
  require(std::isfinite(config.delta_min_hr) && config.delta_min_hr >= 0.0,
          "cohort config: delta_min_hr must be non-negative");
  require(std::isfinite(config.acc_burst_amp) && config.acc_burst_amp >= 0.0,
          "cohort config: acc_burst_amp must be non-negative");
}

std::vector<ParticipantRecord> generate_cohort(const CohortConfig& config) {
  validate(config);
  const std::uint64_t master = derive_seed(config.seed, 0x73796e74ULL);
  std::vector<ParticipantRecord> cohort;
  cohort.reserve(static_cast<std::size_t>(config.n_participants));
  for (int p = 0; p < config.n_participants; ++p) {
    std::string id = "p" + std::string(p + 1 < 10 ? "0" : "") +
                     std::to_string(p + 1);
    cohort.push_back(generate_participant(
        config, id, derive_seed(master, static_cast<std::uint64_t>(p))));
  }
  return cohort;
}

}  // namespace stresskit
