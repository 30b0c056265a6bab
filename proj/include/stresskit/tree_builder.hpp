#pragma once

#include <cstddef>
#include <vector>

#include "stresskit/model.hpp"
#include "stresskit/rng.hpp"

namespace stresskit {

enum class SplitCriterion { mse, friedman_mse, gini };

SplitCriterion criterion_from_name(const std::string& name);
const char* criterion_name(SplitCriterion c);

struct TreeBuildOptions {
  int max_depth = 3;            // <= 0 means unlimited
  int min_samples_leaf = 1;
  int min_samples_split = 2;
  SplitCriterion criterion = SplitCriterion::mse;
  int features_per_split = 0;   // <= 0 means all features
  double min_gain = 1e-12;      // splits must improve by at least this
};

// Row-major matrix of training features.
struct RowMatrix {
  std::size_t n = 0;
  std::size_t d = 0;
  std::vector<double> data;

  double at(std::size_t r, std::size_t c) const { return data[r * d + c]; }
  const double* row(std::size_t r) const { return data.data() + r * d; }
};

// Grows one binary tree over the rows named by `row_indices` (repeats allowed,
// e.g. bootstrap draws). Splits optimize `split_targets` under the chosen
// criterion; every leaf stores sum(leaf_num) / sum(leaf_den) over its rows
// (zero when the denominator underflows). cover counts index multiplicity.
// When features_per_split > 0 each node samples that many distinct feature
// candidates from `rng`; nodes are grown depth-first, left before right, so
// the same seed always yields the same tree.
Tree build_tree(const RowMatrix& x, const std::vector<std::size_t>& row_indices,
                const std::vector<double>& split_targets,
                const std::vector<double>& leaf_num,
                const std::vector<double>& leaf_den,
                const TreeBuildOptions& options, Rng& rng);

}  // namespace stresskit
