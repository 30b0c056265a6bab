#include "stresskit/tree_builder.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "stresskit/error.hpp"

namespace stresskit {

SplitCriterion criterion_from_name(const std::string& name) {
  if (name == "mse") return SplitCriterion::mse;
  if (name == "friedman_mse") return SplitCriterion::friedman_mse;
  if (name == "gini") return SplitCriterion::gini;
  throw config_error("unknown split criterion: " + name);
}

const char* criterion_name(SplitCriterion c) {
  switch (c) {
    case SplitCriterion::mse: return "mse";
    case SplitCriterion::friedman_mse: return "friedman_mse";
    case SplitCriterion::gini: return "gini";
  }
  return "?";
}

namespace {

struct SplitCandidate {
  bool found = false;
  int feature = -1;
  double threshold = 0.0;
  double gain = 0.0;
};

double gini_impurity(double pos, double n) {
  if (n <= 0.0) return 0.0;
  const double p = pos / n;
  return 1.0 - p * p - (1.0 - p) * (1.0 - p);
}

double split_gain(SplitCriterion criterion, double sum_left, double n_left,
                  double sum_right, double n_right) {
  const double n = n_left + n_right;
  const double sum = sum_left + sum_right;
  switch (criterion) {
    case SplitCriterion::mse:
      // Drop in total squared error: S_L^2/n_L + S_R^2/n_R - S_P^2/n_P.
      return sum_left * sum_left / n_left + sum_right * sum_right / n_right -
             sum * sum / n;
    case SplitCriterion::friedman_mse: {
      const double mean_left = sum_left / n_left;
      const double mean_right = sum_right / n_right;
      const double diff = mean_left - mean_right;
      return (n_left * n_right / n) * diff * diff;
    }
    case SplitCriterion::gini:
      // Weighted impurity decrease; targets are 0/1 so sums count positives.
      return n * gini_impurity(sum, n) - n_left * gini_impurity(sum_left, n_left) -
             n_right * gini_impurity(sum_right, n_right);
  }
  return 0.0;
}

struct Builder {
  const RowMatrix& x;
  const std::vector<double>& split_targets;
  const std::vector<double>& leaf_num;
  const std::vector<double>& leaf_den;
  const TreeBuildOptions& options;
  Rng& rng;
  std::vector<TreeNode> nodes;

  int make_leaf(const std::vector<std::size_t>& indices) {
    double num = 0.0;
    double den = 0.0;
    for (std::size_t idx : indices) {
      num += leaf_num[idx];
      den += leaf_den[idx];
    }
    TreeNode leaf;
    leaf.cover = static_cast<double>(indices.size());
    leaf.value = std::abs(den) < 1e-150 ? 0.0 : num / den;
    nodes.push_back(leaf);
    return static_cast<int>(nodes.size() - 1);
  }

  std::vector<int> candidate_features() {
    const int d = static_cast<int>(x.d);
    std::vector<int> feats(static_cast<std::size_t>(d));
    std::iota(feats.begin(), feats.end(), 0);
    if (options.features_per_split <= 0 || options.features_per_split >= d) {
      return feats;
    }
    // Partial Fisher-Yates draw of `features_per_split` distinct features.
    const int k = options.features_per_split;
    for (int i = 0; i < k; ++i) {
      const std::uint64_t span = static_cast<std::uint64_t>(d - i);
      const int j = i + static_cast<int>(rng.next_below(span));
      std::swap(feats[static_cast<std::size_t>(i)], feats[static_cast<std::size_t>(j)]);
    }
    feats.resize(static_cast<std::size_t>(k));
    // Scan order is the tie-break order, so keep it index-ascending.
    std::sort(feats.begin(), feats.end());
    return feats;
  }

  SplitCandidate best_split(const std::vector<std::size_t>& indices) {
    SplitCandidate best;
    const double n = static_cast<double>(indices.size());
    std::vector<std::pair<double, double>> column(indices.size());  // value, target
    for (int f : candidate_features()) {
      for (std::size_t i = 0; i < indices.size(); ++i) {
        column[i] = {x.at(indices[i], static_cast<std::size_t>(f)),
                     split_targets[indices[i]]};
      }
      // Order among equal values is irrelevant: candidate cuts sit only
      // between distinct values, where the prefix sums are order-free.
      std::sort(column.begin(), column.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      double total = 0.0;
      for (const auto& [v, t] : column) total += t;
      double sum_left = 0.0;
      for (std::size_t i = 0; i + 1 < column.size(); ++i) {
        sum_left += column[i].second;
        if (column[i].first == column[i + 1].first) continue;
        const double n_left = static_cast<double>(i + 1);
        const double n_right = n - n_left;
        if (n_left < options.min_samples_leaf || n_right < options.min_samples_leaf) {
          continue;
        }
        const double gain =
            split_gain(options.criterion, sum_left, n_left, total - sum_left, n_right);
        // Strict > keeps the first (lowest feature, lowest threshold) on ties.
        if (gain > best.gain && gain > options.min_gain) {
          double threshold =
              column[i].first + (column[i + 1].first - column[i].first) / 2.0;
          if (!(threshold < column[i + 1].first)) threshold = column[i].first;
          best.found = true;
          best.feature = f;
          best.threshold = threshold;
          best.gain = gain;
        }
      }
    }
    return best;
  }

  int grow(const std::vector<std::size_t>& indices, int depth) {
    const bool depth_ok = options.max_depth <= 0 || depth < options.max_depth;
    bool splittable =
        depth_ok &&
        indices.size() >= static_cast<std::size_t>(options.min_samples_split) &&
        indices.size() >= 2 * static_cast<std::size_t>(options.min_samples_leaf);
    if (splittable) {
      const double first = split_targets[indices.front()];
      bool pure = true;
      for (std::size_t idx : indices) {
        if (split_targets[idx] != first) {
          pure = false;
          break;
        }
      }
      splittable = !pure;
    }
    if (!splittable) return make_leaf(indices);

    const SplitCandidate best = best_split(indices);
    if (!best.found) return make_leaf(indices);

    std::vector<std::size_t> left_rows;
    std::vector<std::size_t> right_rows;
    left_rows.reserve(indices.size());
    right_rows.reserve(indices.size());
    for (std::size_t idx : indices) {
      if (x.at(idx, static_cast<std::size_t>(best.feature)) <= best.threshold) {
        left_rows.push_back(idx);
      } else {
        right_rows.push_back(idx);
      }
    }

    const int my = static_cast<int>(nodes.size());
    nodes.emplace_back();
    const int left = grow(left_rows, depth + 1);
    const int right = grow(right_rows, depth + 1);
    TreeNode& node = nodes[static_cast<std::size_t>(my)];
    node.feature = best.feature;
    node.threshold = best.threshold;
    node.left = left;
    node.right = right;
    node.cover = static_cast<double>(indices.size());
    node.value = 0.0;
    return my;
  }
};

}  // namespace

Tree build_tree(const RowMatrix& x, const std::vector<std::size_t>& row_indices,
                const std::vector<double>& split_targets,
                const std::vector<double>& leaf_num,
                const std::vector<double>& leaf_den,
                const TreeBuildOptions& options, Rng& rng) {
  if (row_indices.empty()) throw train_error("cannot grow a tree from zero rows");
  if (split_targets.size() != x.n || leaf_num.size() != x.n || leaf_den.size() != x.n) {
    throw train_error("tree targets do not match the row count");
  }
  Builder builder{x, split_targets, leaf_num, leaf_den, options, rng, {}};
  const int root = builder.grow(row_indices, 0);
  if (root != 0) throw train_error("tree root must be node 0");
  Tree tree;
  tree.nodes = std::move(builder.nodes);
  return tree;
}

}  // namespace stresskit
