#include "stresskit/explain.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>

#include "stresskit/error.hpp"

namespace stresskit {
namespace {

// One step of the root-to-leaf feature path. zero_fraction is the share
// of the training distribution that follows the path when the feature is
// absent; one_fraction is 1 or 0 depending on whether the input follows
// it; pweight carries the permutation weights of all subset sizes.
struct PathElement {
  int feature = -1;
  double zero_fraction = 1.0;
  double one_fraction = 1.0;
  double pweight = 1.0;
};

void extend_path(std::vector<PathElement>& path, double zero_fraction,
                 double one_fraction, int feature) {
  const std::size_t n = path.size();
  path.push_back({feature, zero_fraction, one_fraction,
                  n == 0 ? 1.0 : 0.0});
  for (std::size_t i = n; i-- > 0;) {
    path[i + 1].pweight += one_fraction * path[i].pweight *
                           static_cast<double>(i + 1) /
                           static_cast<double>(n + 1);
    path[i].pweight = zero_fraction * path[i].pweight *
                      static_cast<double>(n - i) / static_cast<double>(n + 1);
  }
}

// Inverse of extend_path for the element at `index`; returns the path as
// it would have been had that split never been taken.
std::vector<PathElement> unwind_path(std::vector<PathElement> path,
                                     std::size_t index) {
  const std::size_t last = path.size() - 1;
  const double one_fraction = path[index].one_fraction;
  const double zero_fraction = path[index].zero_fraction;
  double next_one = path[last].pweight;
  for (std::size_t i = last; i-- > 0;) {
    if (one_fraction != 0.0) {
      const double tmp = path[i].pweight;
      path[i].pweight = next_one * static_cast<double>(last + 1) /
                        (static_cast<double>(i + 1) * one_fraction);
      next_one = tmp - path[i].pweight * zero_fraction *
                       static_cast<double>(last - i) /
                       static_cast<double>(last + 1);
    } else {
      path[i].pweight = path[i].pweight * static_cast<double>(last + 1) /
                        (zero_fraction * static_cast<double>(last - i));
    }
  }
  for (std::size_t i = index; i < last; ++i) {
    path[i].feature = path[i + 1].feature;
    path[i].zero_fraction = path[i + 1].zero_fraction;
    path[i].one_fraction = path[i + 1].one_fraction;
  }
  path.pop_back();
  return path;
}

double path_weight_sum(const std::vector<PathElement>& path,
                       std::size_t index) {
  const std::vector<PathElement> unwound = unwind_path(path, index);
  double total = 0.0;
  for (const PathElement& element : unwound) total += element.pweight;
  return total;
}

class TreeShapWalker {
 public:
  TreeShapWalker(const Tree& tree, const double* x, std::vector<double>& phi)
      : tree_(tree), x_(x), phi_(phi) {}

  void run() { recurse(0, {}, 1.0, 1.0, -1); }

 private:
  void recurse(int node_index, std::vector<PathElement> path,
               double zero_fraction, double one_fraction, int feature) {
    extend_path(path, zero_fraction, one_fraction, feature);
    const TreeNode& node = tree_.nodes[static_cast<std::size_t>(node_index)];

    if (node.is_leaf()) {
      for (std::size_t i = 1; i < path.size(); ++i) {
        const double w = path_weight_sum(path, i);
        phi_[static_cast<std::size_t>(path[i].feature)] +=
            w * (path[i].one_fraction - path[i].zero_fraction) * node.value;
      }
      return;
    }

    const bool goes_left = x_[node.feature] <= node.threshold;
    const int hot = goes_left ? node.left : node.right;
    const int cold = goes_left ? node.right : node.left;
    const double hot_cover =
        tree_.nodes[static_cast<std::size_t>(hot)].cover;
    const double cold_cover =
        tree_.nodes[static_cast<std::size_t>(cold)].cover;

    // A split on an already-seen feature replaces that path entry: the
    // fractions compose instead of appearing twice.
    double incoming_zero = 1.0;
    double incoming_one = 1.0;
    for (std::size_t i = 1; i < path.size(); ++i) {
      if (path[i].feature == node.feature) {
        incoming_zero = path[i].zero_fraction;
        incoming_one = path[i].one_fraction;
        path = unwind_path(path, i);
        break;
      }
    }

    recurse(hot, path, incoming_zero * hot_cover / node.cover, incoming_one,
            node.feature);
    recurse(cold, path, incoming_zero * cold_cover / node.cover, 0.0,
            node.feature);
  }

  const Tree& tree_;
  const double* x_;
  std::vector<double>& phi_;
};

// Cover-weighted tree expectation with the features in `mask` pinned to
// x and the rest marginalized: the coalition value function shared by
// the fast algorithm and the brute-force oracle.
double masked_expectation(const Tree& tree, int node_index, const double* x,
                          std::uint32_t mask) {
  const TreeNode& node = tree.nodes[static_cast<std::size_t>(node_index)];
  if (node.is_leaf()) return node.value;
  if (mask & (1u << node.feature)) {
    const int next = x[node.feature] <= node.threshold ? node.left : node.right;
    return masked_expectation(tree, next, x, mask);
  }
  const double left_cover =
      tree.nodes[static_cast<std::size_t>(node.left)].cover;
  const double right_cover =
      tree.nodes[static_cast<std::size_t>(node.right)].cover;
  return (left_cover * masked_expectation(tree, node.left, x, mask) +
          right_cover * masked_expectation(tree, node.right, x, mask)) /
         node.cover;
}

const TrainedModel& require_tree_family(const TrainedModel& model) {
  if (!model.is_tree_family()) {
    throw explain_error(
        "shap explanations require a tree model (gbt or random_forest), got " +
        std::string(family_name(model.spec.family)));
  }
  return model;
}

}  // namespace

std::vector<double> tree_shap_single(const Tree& tree, const double* x,
                                     std::size_t n_features) {
  std::vector<double> phi(n_features, 0.0);
  if (tree.nodes.empty()) return phi;
  TreeShapWalker walker(tree, x, phi);
  walker.run();
  return phi;
}

ShapRow tree_shap(const TrainedModel& model,
                  const std::array<double, kNumFeatures>& x) {
  require_tree_family(model);
  ShapRow row;
  row.x = x;
  row.base_value = model.base_score;
  for (const Tree& tree : model.trees) {
    const std::vector<double> phi =
        tree_shap_single(tree, x.data(), kNumFeatures);
    for (std::size_t f = 0; f < kNumFeatures; ++f) {
      row.shap[f] += model.tree_scale * phi[f];
    }
    row.base_value += model.tree_scale * tree.expected_value();
  }
  return row;
}

ShapRow tree_shap(const TrainedModel& model, const FeatureVector& row) {
  return tree_shap(model, row.v);
}

std::vector<double> brute_force_shapley(const Tree& tree, const double* x,
                                        std::size_t n_features) {
  if (n_features > 16) {
    throw explain_error(
        "brute_force_shapley enumerates 2^d coalitions and refuses more "
        "than 16 features, got " +
        std::to_string(n_features));
  }
  std::vector<double> phi(n_features, 0.0);
  if (tree.nodes.empty()) return phi;

  const std::uint32_t subsets = 1u << n_features;
  std::vector<double> value(subsets);
  for (std::uint32_t mask = 0; mask < subsets; ++mask) {
    value[mask] = masked_expectation(tree, 0, x, mask);
  }

  // factorial[k] is exact for k <= 16 (well inside the 53-bit mantissa).
  std::array<double, 17> factorial{};
  factorial[0] = 1.0;
  for (std::size_t k = 1; k < factorial.size(); ++k) {
    factorial[k] = factorial[k - 1] * static_cast<double>(k);
  }
  const double d_factorial = factorial[n_features];

  for (std::size_t f = 0; f < n_features; ++f) {
    const std::uint32_t bit = 1u << f;
    double total = 0.0;
    for (std::uint32_t mask = 0; mask < subsets; ++mask) {
      if (mask & bit) continue;
      const int size = std::popcount(mask);
      const double weight =
          factorial[static_cast<std::size_t>(size)] *
          factorial[n_features - static_cast<std::size_t>(size) - 1] /
          d_factorial;
      total += weight * (value[mask | bit] - value[mask]);
    }
    phi[f] = total;
  }
  return phi;
}

ShapSummary shap_summary(const TrainedModel& model,
                         const std::vector<FeatureVector>& rows) {
  require_tree_family(model);
  if (rows.empty()) {
    throw explain_error("shap_summary needs at least one row");
  }
  ShapSummary summary;
  summary.rows.reserve(rows.size());
  std::array<double, kNumFeatures> mean_abs{};
  for (const FeatureVector& row : rows) {
    summary.rows.push_back(tree_shap(model, row));
    for (std::size_t f = 0; f < kNumFeatures; ++f) {
      mean_abs[f] += std::fabs(summary.rows.back().shap[f]);
    }
  }
  for (std::size_t f = 0; f < kNumFeatures; ++f) {
    mean_abs[f] /= static_cast<double>(rows.size());
    summary.entries.push_back(
        {feature_names()[f], f, mean_abs[f], 0});
  }
  std::stable_sort(summary.entries.begin(), summary.entries.end(),
                   [](const ShapSummaryEntry& a, const ShapSummaryEntry& b) {
                     return a.mean_abs_shap > b.mean_abs_shap;
                   });
  for (std::size_t i = 0; i < summary.entries.size(); ++i) {
    summary.entries[i].rank = i + 1;
  }
  return summary;
}

std::vector<DependencePoint> shap_dependence(const std::string& feature,
                                             const std::vector<ShapRow>& rows) {
  const auto& names = feature_names();
  const auto it = std::find(names.begin(), names.end(), feature);
  if (it == names.end()) {
    throw explain_error("unknown feature name: " + feature);
  }
  const std::size_t index =
      static_cast<std::size_t>(std::distance(names.begin(), it));
  std::vector<DependencePoint> points;
  points.reserve(rows.size());
  for (const ShapRow& row : rows) {
    points.push_back({row.x[index], row.shap[index]});
  }
  std::stable_sort(points.begin(), points.end(),
                   [](const DependencePoint& a, const DependencePoint& b) {
                     return a.feature_value < b.feature_value;
                   });
  return points;
}

}  // namespace stresskit
