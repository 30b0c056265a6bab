#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "stresskit/dataset.hpp"
#include "stresskit/model.hpp"

namespace stresskit {

// One hyperparameter value in a grid axis: either a number or a string,
// matching the numeric/categorical split of ModelSpec.
struct GridValue {
  bool is_number = false;
  double number = 0.0;
  std::string text;

  static GridValue of(double value) { return {true, value, {}}; }
  static GridValue of(std::string value) { return {false, 0.0, std::move(value)}; }

  bool operator==(const GridValue&) const = default;
};

// Axis name -> candidate values. The map keeps axes in name order, which
// fixes the enumeration and tie-break order.
using Grid = std::map<std::string, std::vector<GridValue>>;

enum class GridObjective { test_accuracy, validation_accuracy };

const char* objective_name(GridObjective objective);
GridObjective objective_from_name(const std::string& name);

struct GridEntry {
  ModelSpec spec;
  std::map<std::string, GridValue> values;  // this combination
  double accuracy_percent = 0.0;            // objective value
  bool failed = false;
  std::string failure_reason;
  std::vector<std::string> warnings;  // training warnings for this combo
};

struct GridSearchResult {
  // Sorted by accuracy descending; equal scores fall back to comparing
  // the hyperparameter values axis by axis in name order. Failed
  // combinations sort after every success.
  std::vector<GridEntry> leaderboard;
  std::size_t combinations = 0;
  ModelSpec best;
  GridObjective objective = GridObjective::test_accuracy;
  std::vector<std::string> warnings;  // search-level notes (leakage)
};

// Exhaustive search over the Cartesian product of the grid axes. Each
// combination is trained on the train side and scored on the objective
// side: the held-out test rows for test_accuracy (which tunes on test
// data; a leakage warning is attached), or a participant-level 25%
// validation carve-out of the train side for validation_accuracy.
// Individual combination failures are recorded in the leaderboard and
// the search continues; if every combination fails, throws train_error.
// Throws config_error for an empty grid or an empty axis.
GridSearchResult grid_search(ModelFamily family,
                             const Grid& grid,
                             const SplitDataset& data,
                             GridObjective objective,
                             std::uint64_t seed);

}  // namespace stresskit
