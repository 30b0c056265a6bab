#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "stresskit/model.hpp"
#include "stresskit/types.hpp"

namespace stresskit {

// Per-feature attribution of one prediction, in margin (log-odds) units:
// base_value plus the attributions reproduces the ensemble margin.
struct ShapRow {
  std::array<double, kNumFeatures> shap{};
  double base_value = 0.0;
  std::array<double, kNumFeatures> x{};
};

// Exact Shapley attribution of a single regression tree's cover-weighted
// expectation, by the path-dependent polynomial-time algorithm. Absent
// features are marginalized by descending both children weighted by
// training cover. Returns one value per feature in [0, n_features).
std::vector<double> tree_shap_single(const Tree& tree, const double* x,
                                     std::size_t n_features);

// Ensemble attribution: the per-tree values summed and scaled exactly as
// the margin is (tree_scale per tree, base_score into base_value), so
// base_value + sum(shap) equals margin(x). Throws explain_error for
// non-tree model families.
ShapRow tree_shap(const TrainedModel& model,
                  const std::array<double, kNumFeatures>& x);
ShapRow tree_shap(const TrainedModel& model, const FeatureVector& row);

// Exact Shapley values by enumerating all 2^d coalitions, with the same
// cover-weighted value function. Test oracle; refuses n_features > 16.
std::vector<double> brute_force_shapley(const Tree& tree, const double* x,
                                        std::size_t n_features);

struct ShapSummaryEntry {
  std::string feature;
  std::size_t feature_index = 0;
  double mean_abs_shap = 0.0;
  std::size_t rank = 0;  // 1 = most important
};

struct ShapSummary {
  // Sorted by mean |shap| descending; ties keep feature-column order.
  std::vector<ShapSummaryEntry> entries;
  // One attribution row per input row, in input order (beeswarm data).
  std::vector<ShapRow> rows;
};

// Attribution of every row plus the mean-|shap| importance ranking.
// Throws explain_error when rows is empty or the family has no trees.
ShapSummary shap_summary(const TrainedModel& model,
                         const std::vector<FeatureVector>& rows);

struct DependencePoint {
  double feature_value = 0.0;
  double shap_value = 0.0;

  bool operator==(const DependencePoint&) const = default;
};

// (feature value, shap value) pairs for one feature, sorted by feature
// value with ties keeping row order. Throws explain_error for an unknown
// feature name.
std::vector<DependencePoint> shap_dependence(const std::string& feature,
                                             const std::vector<ShapRow>& rows);

}  // namespace stresskit
