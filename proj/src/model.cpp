#include "stresskit/model.hpp"

#include <algorithm>
#include <cmath>

#include "stresskit/error.hpp"
#include "stresskit/kernels.hpp"

namespace stresskit {

const char* family_name(ModelFamily family) {
  switch (family) {
    case ModelFamily::gbt: return "gbt";
    case ModelFamily::random_forest: return "random_forest";
    case ModelFamily::glm: return "glm";
    case ModelFamily::lda: return "lda";
    case ModelFamily::svm_rbf: return "svm_rbf";
    case ModelFamily::knn: return "knn";
  }
  return "?";
}

ModelFamily family_from_name(const std::string& name) {
  if (name == "gbt") return ModelFamily::gbt;
  if (name == "random_forest") return ModelFamily::random_forest;
  if (name == "glm") return ModelFamily::glm;
  if (name == "lda") return ModelFamily::lda;
  if (name == "svm_rbf") return ModelFamily::svm_rbf;
  if (name == "knn") return ModelFamily::knn;
  throw config_error("unknown model family: " + name);
}

double ModelSpec::num(const std::string& name) const {
  auto it = numeric.find(name);
  if (it == numeric.end()) {
    throw config_error(std::string(family_name(family)) +
                       " is missing hyperparameter: " + name);
  }
  return it->second;
}

std::string ModelSpec::cat(const std::string& name) const {
  auto it = categorical.find(name);
  if (it == categorical.end()) {
    throw config_error(std::string(family_name(family)) +
                       " is missing hyperparameter: " + name);
  }
  return it->second;
}

ModelSpec default_spec(ModelFamily family, std::uint64_t seed) {
  ModelSpec spec;
  spec.family = family;
  spec.seed = seed;
  switch (family) {
    case ModelFamily::gbt:
      spec.categorical = {{"loss", "deviance"}, {"criterion", "friedman_mse"}};
      spec.numeric = {{"n_estimators", 100}, {"max_depth", 3}, {"learning_rate", 0.1}};
      break;
    case ModelFamily::random_forest:
      // 0 means "no limit" / "floor(sqrt(d)) features", resolved at train time.
      spec.numeric = {{"n_trees", 100}, {"max_depth", 0}, {"features_per_split", 0}};
      break;
    case ModelFamily::glm:
      spec.numeric = {{"l2", 0.0}, {"max_iter", 100}, {"tol", 1e-8}};
      break;
    case ModelFamily::lda:
      spec.numeric = {{"shrinkage", 1e-6}};
      break;
    case ModelFamily::svm_rbf:
      // gamma 0 means "auto": 1 / (d * var(X)) on the standardized matrix.
      spec.numeric = {{"C", 1.0}, {"gamma", 0.0}, {"tol", 1e-3}, {"max_passes", 10}};
      break;
    case ModelFamily::knn:
      spec.numeric = {{"k", 5}};
      break;
  }
  return spec;
}

namespace {

bool is_integral(double v) {
  return std::isfinite(v) && v == std::floor(v) && std::abs(v) < 9.0e15;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw config_error(message);
}

void check_keys(const ModelSpec& spec, const std::vector<std::string>& numeric_keys,
                const std::vector<std::string>& categorical_keys) {
  for (const auto& [key, value] : spec.numeric) {
    (void)value;
    require(std::find(numeric_keys.begin(), numeric_keys.end(), key) != numeric_keys.end(),
            std::string(family_name(spec.family)) + ": unknown hyperparameter: " + key);
  }
  for (const auto& [key, value] : spec.categorical) {
    (void)value;
    require(std::find(categorical_keys.begin(), categorical_keys.end(), key) !=
                categorical_keys.end(),
            std::string(family_name(spec.family)) + ": unknown hyperparameter: " + key);
  }
  for (const auto& key : numeric_keys) {
    require(spec.numeric.count(key) == 1,
            std::string(family_name(spec.family)) + " is missing hyperparameter: " + key);
  }
  for (const auto& key : categorical_keys) {
    require(spec.categorical.count(key) == 1,
            std::string(family_name(spec.family)) + " is missing hyperparameter: " + key);
  }
}

}  // namespace

void validate_spec(const ModelSpec& spec) {
  switch (spec.family) {
    case ModelFamily::gbt: {
      check_keys(spec, {"n_estimators", "max_depth", "learning_rate"},
                 {"loss", "criterion"});
      const std::string loss = spec.cat("loss");
      require(loss == "deviance" || loss == "exponential",
              "gbt loss must be deviance or exponential, got: " + loss);
      const std::string criterion = spec.cat("criterion");
      require(criterion == "friedman_mse" || criterion == "mse",
              "gbt criterion must be friedman_mse or mse, got: " + criterion);
      require(is_integral(spec.num("n_estimators")) && spec.num("n_estimators") >= 1,
              "gbt n_estimators must be an integer >= 1");
      require(is_integral(spec.num("max_depth")) && spec.num("max_depth") >= 1,
              "gbt max_depth must be an integer >= 1");
      const double lr = spec.num("learning_rate");
      require(std::isfinite(lr) && lr > 0.0 && lr <= 1.0,
              "gbt learning_rate must lie in (0, 1]");
      break;
    }
    case ModelFamily::random_forest:
      check_keys(spec, {"n_trees", "max_depth", "features_per_split"}, {});
      require(is_integral(spec.num("n_trees")) && spec.num("n_trees") >= 1,
              "random_forest n_trees must be an integer >= 1");
      require(is_integral(spec.num("max_depth")) && spec.num("max_depth") >= 0,
              "random_forest max_depth must be an integer >= 0 (0 = unlimited)");
      require(is_integral(spec.num("features_per_split")) &&
                  spec.num("features_per_split") >= 0 &&
                  spec.num("features_per_split") <= kNumFeatures,
              "random_forest features_per_split must be an integer in [0, 10]");
      break;
    case ModelFamily::glm:
      check_keys(spec, {"l2", "max_iter", "tol"}, {});
      require(std::isfinite(spec.num("l2")) && spec.num("l2") >= 0.0,
              "glm l2 must be >= 0");
      require(is_integral(spec.num("max_iter")) && spec.num("max_iter") >= 1,
              "glm max_iter must be an integer >= 1");
      require(std::isfinite(spec.num("tol")) && spec.num("tol") > 0.0,
              "glm tol must be > 0");
      break;
    case ModelFamily::lda:
      check_keys(spec, {"shrinkage"}, {});
      require(std::isfinite(spec.num("shrinkage")) && spec.num("shrinkage") >= 0.0,
              "lda shrinkage must be >= 0");
      break;
    case ModelFamily::svm_rbf:
      check_keys(spec, {"C", "gamma", "tol", "max_passes"}, {});
      require(std::isfinite(spec.num("C")) && spec.num("C") > 0.0, "svm_rbf C must be > 0");
      require(std::isfinite(spec.num("gamma")) && spec.num("gamma") >= 0.0,
              "svm_rbf gamma must be >= 0 (0 = auto)");
      require(std::isfinite(spec.num("tol")) && spec.num("tol") > 0.0,
              "svm_rbf tol must be > 0");
      require(is_integral(spec.num("max_passes")) && spec.num("max_passes") >= 1,
              "svm_rbf max_passes must be an integer >= 1");
      break;
    case ModelFamily::knn:
      check_keys(spec, {"k"}, {});
      require(is_integral(spec.num("k")) && spec.num("k") >= 1,
              "knn k must be an integer >= 1");
      break;
  }
}

double Tree::predict(const double* x) const {
  int node = 0;
  while (!nodes[static_cast<std::size_t>(node)].is_leaf()) {
    const TreeNode& n = nodes[static_cast<std::size_t>(node)];
    node = x[n.feature] <= n.threshold ? n.left : n.right;
  }
  return nodes[static_cast<std::size_t>(node)].value;
}

double Tree::expected_value() const {
  double total = 0.0;
  double weighted = 0.0;
  for (const TreeNode& n : nodes) {
    if (n.is_leaf()) {
      total += n.cover;
      weighted += n.cover * n.value;
    }
  }
  return total > 0.0 ? weighted / total : 0.0;
}

int Tree::max_feature() const {
  int top = -1;
  for (const TreeNode& n : nodes) top = std::max(top, n.feature);
  return top;
}

void Standardizer::fit(const std::vector<FeatureVector>& rows) {
  if (rows.empty()) throw train_error("cannot standardize zero rows");
  identity = false;
  mean.assign(kNumFeatures, 0.0);
  std.assign(kNumFeatures, 0.0);
  const double n = static_cast<double>(rows.size());
  for (const FeatureVector& row : rows) {
    for (std::size_t j = 0; j < kNumFeatures; ++j) mean[j] += row.v[j];
  }
  for (std::size_t j = 0; j < kNumFeatures; ++j) mean[j] /= n;
  for (const FeatureVector& row : rows) {
    for (std::size_t j = 0; j < kNumFeatures; ++j) {
      const double dev = row.v[j] - mean[j];
      std[j] += dev * dev;
    }
  }
  for (std::size_t j = 0; j < kNumFeatures; ++j) {
    // Population std; constant columns pass through unscaled.
    std[j] = std::sqrt(std[j] / n);
    if (std[j] <= 0.0) std[j] = 1.0;
  }
}

std::vector<double> Standardizer::apply(const std::array<double, kNumFeatures>& x) const {
  std::vector<double> out(kNumFeatures);
  if (identity) {
    std::copy(x.begin(), x.end(), out.begin());
    return out;
  }
  for (std::size_t j = 0; j < kNumFeatures; ++j) out[j] = (x[j] - mean[j]) / std[j];
  return out;
}

std::vector<std::string> feature_name_vector() {
  const auto& names = feature_names();
  return {names.begin(), names.end()};
}

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

bool TrainedModel::is_tree_family() const {
  return spec.family == ModelFamily::gbt || spec.family == ModelFamily::random_forest;
}

double TrainedModel::margin(const std::array<double, kNumFeatures>& x) const {
  if (!is_tree_family()) throw eval_error("margin is defined for tree families only");
  double sum = 0.0;
  for (const Tree& tree : trees) sum += tree.predict(x.data());
  return base_score + tree_scale * sum;
}

double TrainedModel::score(const std::array<double, kNumFeatures>& x) const {
  switch (spec.family) {
    case ModelFamily::gbt:
      return sigmoid(margin(x));
    case ModelFamily::random_forest:
      return std::clamp(margin(x), 0.0, 1.0);
    case ModelFamily::glm:
    case ModelFamily::lda: {
      const std::vector<double> xs = standardizer.apply(x);
      double z = intercept;
      for (std::size_t j = 0; j < kNumFeatures; ++j) z += coef[j] * xs[j];
      return sigmoid(z);
    }
    case ModelFamily::svm_rbf: {
      const std::vector<double> xs = standardizer.apply(x);
      double f = svm_bias;
      for (std::size_t i = 0; i < sv.size(); ++i) {
        const double dist2 =
            kernels::squared_distance(sv[i].data(), xs.data(), kNumFeatures);
        f += sv_coef[i] * std::exp(-svm_gamma * dist2);
      }
      return sigmoid(-(platt_a * f + platt_b));
    }
    case ModelFamily::knn: {
      const std::vector<double> xs = standardizer.apply(x);
      const std::size_t k = static_cast<std::size_t>(spec.num("k"));
      std::vector<std::pair<double, std::size_t>> order(knn_points.size());
      for (std::size_t i = 0; i < knn_points.size(); ++i) {
        // Equal distances resolve to the lower row index via the pair order.
        order[i] = {kernels::squared_distance(knn_points[i].data(), xs.data(), kNumFeatures),
                    i};
      }
      std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k),
                        order.end());
      double stress = 0.0;
      for (std::size_t i = 0; i < k; ++i) stress += knn_labels[order[i].second];
      return stress / static_cast<double>(k);
    }
  }
  throw eval_error("unhandled model family");
}

std::vector<FeatureVector> canonical_order(std::vector<FeatureVector> rows) {
  std::sort(rows.begin(), rows.end(), [](const FeatureVector& a, const FeatureVector& b) {
    if (a.v != b.v) return a.v < b.v;
    if (a.label != b.label) return label_value(a.label) < label_value(b.label);
    return a.participant_id < b.participant_id;
  });
  return rows;
}

TrainedModel train_model(const ModelSpec& spec, const std::vector<FeatureVector>& rows) {
  validate_spec(spec);
  if (rows.empty()) throw train_error("cannot train on zero rows");
  switch (spec.family) {
    case ModelFamily::gbt: return train_gbt(rows, spec);
    case ModelFamily::random_forest: return train_random_forest(rows, spec);
    case ModelFamily::glm: return train_glm(rows, spec);
    case ModelFamily::lda: return train_lda(rows, spec);
    case ModelFamily::svm_rbf: return train_svm_rbf(rows, spec);
    case ModelFamily::knn: return train_knn(rows, spec);
  }
  throw train_error("unhandled model family");
}

}  // namespace stresskit
