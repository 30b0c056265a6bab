#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "stresskit/types.hpp"

namespace stresskit {

enum class ModelFamily { gbt, random_forest, glm, lda, svm_rbf, knn };

const char* family_name(ModelFamily family);
ModelFamily family_from_name(const std::string& name);  // throws config_error

// Family-specific hyperparameters as named values. Numeric knobs live in
// `numeric` (integral ones are validated as integers), categorical knobs
// (gbt loss / criterion) in `categorical`. validate_spec rejects unknown
// names and out-of-range values up front.
struct ModelSpec {
  ModelFamily family = ModelFamily::gbt;
  std::map<std::string, double> numeric;
  std::map<std::string, std::string> categorical;
  std::uint64_t seed = 0;

  double num(const std::string& name) const;
  std::string cat(const std::string& name) const;
};

ModelSpec default_spec(ModelFamily family, std::uint64_t seed);
void validate_spec(const ModelSpec& spec);  // throws config_error

// One node of a binary decision tree. Rows with x[feature] <= threshold
// go left. cover is the count of training rows that reached the node and
// satisfies cover(parent) = cover(left) + cover(right).
struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;  // leaf value (margin contribution / class fraction)
  double cover = 0.0;

  bool is_leaf() const { return feature < 0; }
};

struct Tree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root; never empty

  double predict(const double* x) const;
  // Cover-weighted expectation of the leaf values.
  double expected_value() const;
  int max_feature() const;
};

// Per-feature affine normalization fitted on the training side. Tree
// families keep the identity (scale invariance is theirs for free).
struct Standardizer {
  bool identity = true;
  std::vector<double> mean;
  std::vector<double> std;  // zero-variance columns are stored as 1

  void fit(const std::vector<FeatureVector>& rows);
  std::vector<double> apply(const std::array<double, kNumFeatures>& x) const;
};

// Fitted classifier. Exactly one family's state block is populated;
// score() is deterministic and always lands in [0, 1].
struct TrainedModel {
  ModelSpec spec;
  std::vector<std::string> feature_names;
  Standardizer standardizer;
  std::vector<std::string> warnings;

  // gbt / random_forest
  std::vector<Tree> trees;
  double base_score = 0.0;  // log-odds offset (gbt)
  double tree_scale = 1.0;  // learning rate (gbt) or 1/n_trees (rf)

  // glm / lda
  std::vector<double> coef;
  double intercept = 0.0;

  // svm_rbf
  std::vector<std::vector<double>> sv;  // standardized support vectors
  std::vector<double> sv_coef;          // alpha_i * y_i
  double svm_bias = 0.0;
  double svm_gamma = 0.0;
  double platt_a = 0.0;
  double platt_b = 0.0;

  // knn
  std::vector<std::vector<double>> knn_points;  // standardized rows
  std::vector<int> knn_labels;

  bool is_tree_family() const;
  // Pre-sigmoid margin for tree families (rf margins are the mean leaf
  // fraction). Used by the SHAP module.
  double margin(const std::array<double, kNumFeatures>& x) const;
  double score(const std::array<double, kNumFeatures>& x) const;
  double score(const FeatureVector& row) const { return score(row.v); }
};

double sigmoid(double z);

// feature_names() as a vector, in FeatureVector column order.
std::vector<std::string> feature_name_vector();

// Training-row canonical order: rows are sorted by (features, label,
// participant) before any seeded work, so a fitted model depends on the
// multiset of rows and the seed, never on input order.
std::vector<FeatureVector> canonical_order(std::vector<FeatureVector> rows);

TrainedModel train_model(const ModelSpec& spec,
                         const std::vector<FeatureVector>& rows);

TrainedModel train_gbt(const std::vector<FeatureVector>& rows,
                       const ModelSpec& spec);
TrainedModel train_random_forest(const std::vector<FeatureVector>& rows,
                                 const ModelSpec& spec);
TrainedModel train_glm(const std::vector<FeatureVector>& rows,
                       const ModelSpec& spec);
TrainedModel train_lda(const std::vector<FeatureVector>& rows,
                       const ModelSpec& spec);
TrainedModel train_svm_rbf(const std::vector<FeatureVector>& rows,
                           const ModelSpec& spec);
TrainedModel train_knn(const std::vector<FeatureVector>& rows,
                       const ModelSpec& spec);

}  // namespace stresskit
