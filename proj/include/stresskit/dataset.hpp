#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "stresskit/types.hpp"

namespace stresskit {

struct SplitDataset {
  std::vector<FeatureVector> train;
  std::vector<FeatureVector> test;
  std::set<std::string> train_participants;
  std::set<std::string> test_participants;
  double achieved_fraction = 0.0;  // train rows / total rows
  std::uint64_t seed = 0;
};

// Greedy participant-level partition: participants in descending row
// count (seed breaks ties among equal counts) are each assigned to the
// side that keeps the running train-row fraction closest to the target.
// Neither side is left empty. Throws error with fewer than 2
// participants.
SplitDataset participant_split(const std::vector<FeatureVector>& rows,
                               double target_train_fraction,
                               std::uint64_t seed);

struct UpsampleReport {
  std::size_t stress_before = 0;
  std::size_t stress_after = 0;
  std::size_t duplicates_added = 0;
  bool noop_target_below_current = false;
};

// Duplicates stress rows (uniformly, with replacement, seeded) until the
// stress count reaches floor(n_nonstress * stress_parts/nonstress_parts).
// Originals are always retained and non-stress rows are untouched. A
// target below the current count is a warning no-op; zero stress rows is
// an error.
std::vector<FeatureVector> upsample_stress(std::vector<FeatureVector> train,
                                           UpsampleReport& report,
                                           std::uint64_t seed,
                                           int nonstress_parts = 10,
                                           int stress_parts = 7);

struct LabelCounts {
  std::size_t stress = 0;
  std::size_t nonstress = 0;
};

LabelCounts count_labels(const std::vector<FeatureVector>& rows);

}  // namespace stresskit
