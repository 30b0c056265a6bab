#include <cmath>
#include <numeric>

#include "stresskit/error.hpp"
#include "stresskit/model.hpp"
#include "stresskit/rng.hpp"
#include "stresskit/tree_builder.hpp"

namespace stresskit {

namespace {

RowMatrix to_matrix(const std::vector<FeatureVector>& rows) {
  RowMatrix x;
  x.n = rows.size();
  x.d = kNumFeatures;
  x.data.resize(x.n * x.d);
  for (std::size_t r = 0; r < x.n; ++r) {
    for (std::size_t c = 0; c < kNumFeatures; ++c) x.data[r * x.d + c] = rows[r].v[c];
  }
  return x;
}

// Newton leaf steps on saturated stages can blow up once p(1-p) underflows;
// with learning_rate <= 1 this cap keeps every applied step mild without
// touching ordinary fits.
constexpr double kMaxLeafValue = 8.0;

void clamp_leaves(Tree& tree) {
  for (TreeNode& node : tree.nodes) {
    if (!node.is_leaf()) continue;
    if (node.value > kMaxLeafValue) node.value = kMaxLeafValue;
    if (node.value < -kMaxLeafValue) node.value = -kMaxLeafValue;
  }
}

}  // namespace

TrainedModel train_gbt(const std::vector<FeatureVector>& input, const ModelSpec& spec) {
  const std::vector<FeatureVector> rows = canonical_order(input);
  const std::size_t n = rows.size();
  if (n == 0) throw train_error("cannot train on zero rows");

  std::size_t n_stress = 0;
  for (const FeatureVector& row : rows) n_stress += label_value(row.label);
  if (n_stress == 0 || n_stress == n) {
    throw train_error("gbt requires both labels in the training data");
  }
  const double p0 = static_cast<double>(n_stress) / static_cast<double>(n);

  const RowMatrix x = to_matrix(rows);
  const std::string loss = spec.cat("loss");
  const int n_estimators = static_cast<int>(spec.num("n_estimators"));
  const double lr = spec.num("learning_rate");

  TreeBuildOptions options;
  options.max_depth = static_cast<int>(spec.num("max_depth"));
  options.criterion = criterion_from_name(spec.cat("criterion"));
  options.features_per_split = 0;

  TrainedModel model;
  model.spec = spec;
  model.feature_names = feature_name_vector();
  model.standardizer.identity = true;
  model.tree_scale = lr;
  model.trees.reserve(static_cast<std::size_t>(n_estimators));

  std::vector<std::size_t> all_rows(n);
  std::iota(all_rows.begin(), all_rows.end(), 0);
  std::vector<double> margins(n);
  std::vector<double> grad(n);
  std::vector<double> hess(n);
  Rng rng(derive_seed(spec.seed, 0x67627400ULL));  // unused while all features scan

  if (loss == "deviance") {
    model.base_score = std::log(p0 / (1.0 - p0));
    std::fill(margins.begin(), margins.end(), model.base_score);
    for (int stage = 0; stage < n_estimators; ++stage) {
      for (std::size_t i = 0; i < n; ++i) {
        const double p = sigmoid(margins[i]);
        grad[i] = static_cast<double>(label_value(rows[i].label)) - p;
        hess[i] = p * (1.0 - p);
      }
      Tree tree = build_tree(x, all_rows, grad, grad, hess, options, rng);
      clamp_leaves(tree);
      for (std::size_t i = 0; i < n; ++i) margins[i] += lr * tree.predict(x.row(i));
      model.trees.push_back(std::move(tree));
    }
  } else {  // exponential
    model.base_score = 0.5 * std::log(p0 / (1.0 - p0));
    std::fill(margins.begin(), margins.end(), model.base_score);
    for (int stage = 0; stage < n_estimators; ++stage) {
      for (std::size_t i = 0; i < n; ++i) {
        const double y = rows[i].label == Label::stress ? 1.0 : -1.0;
        const double w = std::exp(-y * margins[i]);
        grad[i] = y * w;
        hess[i] = w;
      }
      Tree tree = build_tree(x, all_rows, grad, grad, hess, options, rng);
      clamp_leaves(tree);
      for (std::size_t i = 0; i < n; ++i) margins[i] += lr * tree.predict(x.row(i));
      model.trees.push_back(std::move(tree));
    }
  }
  return model;
}

TrainedModel train_random_forest(const std::vector<FeatureVector>& input,
                                 const ModelSpec& spec) {
  const std::vector<FeatureVector> rows = canonical_order(input);
  const std::size_t n = rows.size();
  if (n == 0) throw train_error("cannot train on zero rows");

  const RowMatrix x = to_matrix(rows);
  const int n_trees = static_cast<int>(spec.num("n_trees"));
  int features_per_split = static_cast<int>(spec.num("features_per_split"));
  if (features_per_split <= 0) {
    features_per_split =
        static_cast<int>(std::floor(std::sqrt(static_cast<double>(kNumFeatures))));
  }

  TreeBuildOptions options;
  options.max_depth = static_cast<int>(spec.num("max_depth"));  // 0 = unlimited
  options.criterion = SplitCriterion::gini;
  options.features_per_split = features_per_split;

  std::vector<double> labels(n);
  std::vector<double> ones(n, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    labels[i] = static_cast<double>(label_value(rows[i].label));
  }

  TrainedModel model;
  model.spec = spec;
  model.feature_names = feature_name_vector();
  model.standardizer.identity = true;
  model.base_score = 0.0;
  model.tree_scale = 1.0 / static_cast<double>(n_trees);
  model.trees.reserve(static_cast<std::size_t>(n_trees));

  std::vector<std::size_t> bootstrap(n);
  for (int t = 0; t < n_trees; ++t) {
    Rng tree_rng(derive_seed(spec.seed, static_cast<std::uint64_t>(t)));
    for (std::size_t i = 0; i < n; ++i) {
      bootstrap[i] = static_cast<std::size_t>(tree_rng.next_below(n));
    }
    model.trees.push_back(
        build_tree(x, bootstrap, labels, labels, ones, options, tree_rng));
  }
  return model;
}

}  // namespace stresskit
