#include "stresskit/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "stresskit/error.hpp"
#include "stresskit/rng.hpp"

namespace stresskit {

SplitDataset participant_split(const std::vector<FeatureVector>& rows,
                               double target_train_fraction,
                               std::uint64_t seed) {
  if (!(target_train_fraction > 0.0 && target_train_fraction < 1.0)) {
    throw error("participant_split: target fraction must be in (0, 1)");
  }

  std::map<std::string, std::size_t> counts;
  for (const auto& row : rows) ++counts[row.participant_id];
  if (counts.size() < 2) {
    throw error("participant_split: need at least 2 distinct participants");
  }

  struct Entry {
    std::string id;
    std::size_t count;
    std::uint64_t tie_key;
  };
  std::vector<Entry> entries;
  entries.reserve(counts.size());
  for (const auto& [id, count] : counts) {
    std::uint64_t h = seed;
    for (const char c : id) h = splitmix64(h) ^ static_cast<std::uint64_t>(c);
    entries.push_back({id, count, splitmix64(h)});
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    if (a.count != b.count) return a.count > b.count;
    if (a.tie_key != b.tie_key) return a.tie_key < b.tie_key;
    return a.id < b.id;
  });

  const double total = static_cast<double>(rows.size());
  SplitDataset split;
  split.seed = seed;
  std::size_t train_rows = 0;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    const bool last = i + 1 == entries.size();
    bool to_train;
    if (last && split.train_participants.empty()) {
      to_train = true;
    } else if (last && split.test_participants.empty()) {
      to_train = false;
    } else {
      const double with = (static_cast<double>(train_rows + e.count)) / total;
      const double without = static_cast<double>(train_rows) / total;
      to_train = std::abs(with - target_train_fraction) <
                 std::abs(without - target_train_fraction);
    }
    if (to_train) {
      split.train_participants.insert(e.id);
      train_rows += e.count;
    } else {
      split.test_participants.insert(e.id);
    }
  }

  for (const auto& row : rows) {
    if (split.train_participants.count(row.participant_id) != 0) {
      split.train.push_back(row);
    } else {
      split.test.push_back(row);
    }
  }
  split.achieved_fraction = static_cast<double>(split.train.size()) / total;
  return split;
}

std::vector<FeatureVector> upsample_stress(std::vector<FeatureVector> train,
                                           UpsampleReport& report,
                                           std::uint64_t seed,
                                           int nonstress_parts,
                                           int stress_parts) {
  if (nonstress_parts <= 0 || stress_parts <= 0) {
    throw error("upsample_stress: ratio parts must be positive");
  }

  std::vector<std::size_t> stress_idx;
  std::size_t n_nonstress = 0;
  for (std::size_t i = 0; i < train.size(); ++i) {
    if (train[i].label == Label::stress) {
      stress_idx.push_back(i);
    } else {
      ++n_nonstress;
    }
  }
  if (stress_idx.empty()) {
    throw error("upsample_stress: no stress rows to resample from");
  }

  report.stress_before = stress_idx.size();
  const auto target = static_cast<std::size_t>(
      (static_cast<unsigned long long>(n_nonstress) *
       static_cast<unsigned long long>(stress_parts)) /
      static_cast<unsigned long long>(nonstress_parts));
  if (target < stress_idx.size()) {
    report.noop_target_below_current = true;
    report.stress_after = stress_idx.size();
    return train;
  }

  Rng rng(derive_seed(seed, 0x75707361 /* "upsa" */));
  const std::size_t to_add = target - stress_idx.size();
  train.reserve(train.size() + to_add);
  for (std::size_t k = 0; k < to_add; ++k) {
    const std::size_t pick =
        stress_idx[static_cast<std::size_t>(rng.next_below(stress_idx.size()))];
    train.push_back(train[pick]);
  }
  report.stress_after = target;
  report.duplicates_added = to_add;
  return train;
}

LabelCounts count_labels(const std::vector<FeatureVector>& rows) {
  LabelCounts counts;
  for (const auto& row : rows) {
    if (row.label == Label::stress) {
      ++counts.stress;
    } else {
      ++counts.nonstress;
    }
  }
  return counts;
}

}  // namespace stresskit
