#include "stresskit/grid.hpp"

#include <algorithm>
#include <utility>

#include "stresskit/error.hpp"
#include "stresskit/evaluation.hpp"
#include "stresskit/rng.hpp"

namespace stresskit {
namespace {

void apply_value(ModelSpec& spec, const std::string& name,
                 const GridValue& value) {
  if (spec.numeric.count(name) != 0) {
    if (!value.is_number) {
      throw config_error("hyperparameter '" + name +
                         "' expects a number, got \"" + value.text + "\"");
    }
    spec.numeric[name] = value.number;
    return;
  }
  if (spec.categorical.count(name) != 0) {
    if (value.is_number) {
      throw config_error("hyperparameter '" + name + "' expects a string");
    }
    spec.categorical[name] = value.text;
    return;
  }
  throw config_error("unknown hyperparameter '" + name + "' for family " +
                     std::string(family_name(spec.family)));
}

// Lexicographic comparison of two combinations over the shared axis
// names (map order): numbers numerically, strings byte-wise.
bool values_less(const std::map<std::string, GridValue>& a,
                 const std::map<std::string, GridValue>& b) {
  auto ia = a.begin();
  auto ib = b.begin();
  for (; ia != a.end() && ib != b.end(); ++ia, ++ib) {
    const GridValue& va = ia->second;
    const GridValue& vb = ib->second;
    if (va.is_number != vb.is_number) return vb.is_number;  // numbers first
    if (va.is_number) {
      if (va.number != vb.number) return va.number < vb.number;
    } else {
      if (va.text != vb.text) return va.text < vb.text;
    }
  }
  return false;
}

std::vector<double> model_scores(const TrainedModel& model,
                                 const std::vector<FeatureVector>& rows) {
  std::vector<double> scores;
  scores.reserve(rows.size());
  for (const auto& row : rows) scores.push_back(model.score(row));
  return scores;
}

std::vector<int> labels_of(const std::vector<FeatureVector>& rows) {
  std::vector<int> labels;
  labels.reserve(rows.size());
  for (const auto& row : rows) labels.push_back(label_value(row.label));
  return labels;
}

}  // namespace

const char* objective_name(GridObjective objective) {
  switch (objective) {
    case GridObjective::test_accuracy:
      return "test_accuracy";
    case GridObjective::validation_accuracy:
      return "validation_accuracy";
  }
  return "test_accuracy";
}

GridObjective objective_from_name(const std::string& name) {
  if (name == "test_accuracy") return GridObjective::test_accuracy;
  if (name == "validation_accuracy") return GridObjective::validation_accuracy;
  throw config_error("unknown grid objective \"" + name +
                     "\" (expected test_accuracy or validation_accuracy)");
}

GridSearchResult grid_search(ModelFamily family,
                             const Grid& grid,
                             const SplitDataset& data,
                             GridObjective objective,
                             std::uint64_t seed) {
  if (grid.empty()) {
    throw config_error("grid_search requires a non-empty grid");
  }
  for (const auto& [name, values] : grid) {
    if (values.empty()) {
      throw config_error("grid axis '" + name + "' has no values");
    }
  }

  GridSearchResult result;
  result.objective = objective;

  // Resolve the rows each combination trains on and is scored against.
  const std::vector<FeatureVector>* fit_rows = &data.train;
  const std::vector<FeatureVector>* score_rows = &data.test;
  SplitDataset carved;
  if (objective == GridObjective::validation_accuracy) {
    carved = participant_split(data.train, 0.75,
                               derive_seed(seed, 0x76616c69ULL));
    fit_rows = &carved.train;
    score_rows = &carved.test;
  } else {
    result.warnings.push_back(
        "objective test_accuracy selects hyperparameters on the held-out "
        "test rows, which leaks test information into the model choice; "
        "use validation_accuracy for an untouched test set");
  }
  const std::vector<int> score_labels = labels_of(*score_rows);

  std::vector<std::pair<std::string, const std::vector<GridValue>*>> axes;
  axes.reserve(grid.size());
  result.combinations = 1;
  for (const auto& [name, values] : grid) {
    axes.emplace_back(name, &values);
    result.combinations *= values.size();
  }

  std::vector<std::size_t> cursor(axes.size(), 0);
  for (std::size_t combo = 0; combo < result.combinations; ++combo) {
    GridEntry entry;
    entry.spec = default_spec(family, seed);
    for (std::size_t axis = 0; axis < axes.size(); ++axis) {
      entry.values[axes[axis].first] = (*axes[axis].second)[cursor[axis]];
    }
    try {
      for (const auto& [name, value] : entry.values) {
        apply_value(entry.spec, name, value);
      }
      const TrainedModel model = train_model(entry.spec, *fit_rows);
      entry.warnings = model.warnings;
      entry.accuracy_percent =
          100.0 * accuracy_fraction(model_scores(model, *score_rows),
                                    score_labels);
    } catch (const error& failure) {
      entry.failed = true;
      entry.failure_reason = failure.what();
      entry.accuracy_percent = 0.0;
    }
    result.leaderboard.push_back(std::move(entry));

    // Row-major advance: the last axis moves fastest.
    for (std::size_t axis = axes.size(); axis-- > 0;) {
      if (++cursor[axis] < axes[axis].second->size()) break;
      cursor[axis] = 0;
    }
  }

  std::stable_sort(result.leaderboard.begin(), result.leaderboard.end(),
                   [](const GridEntry& a, const GridEntry& b) {
                     if (a.failed != b.failed) return b.failed;
                     if (!a.failed && a.accuracy_percent != b.accuracy_percent) {
                       return a.accuracy_percent > b.accuracy_percent;
                     }
                     return values_less(a.values, b.values);
                   });

  if (result.leaderboard.front().failed) {
    throw train_error("every grid combination failed; first failure: " +
                      result.leaderboard.front().failure_reason);
  }
  result.best = result.leaderboard.front().spec;
  return result;
}

}  // namespace stresskit
