#include "stresskit/model_io.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "stresskit/error.hpp"

namespace stresskit {
namespace {

// Insertion-ordered JSON so equal models serialize to equal bytes.
using ojson = nlohmann::ordered_json;

constexpr int kMaxTreeDepth = 512;

ojson node_to_json(const Tree& tree, int index) {
  const TreeNode& n = tree.nodes.at(static_cast<std::size_t>(index));
  ojson j;
  if (n.is_leaf()) {
    j["value"] = n.value;
    j["cover"] = n.cover;
  } else {
    j["feature"] = n.feature;
    j["threshold"] = n.threshold;
    j["cover"] = n.cover;
    j["left"] = node_to_json(tree, n.left);
    j["right"] = node_to_json(tree, n.right);
  }
  return j;
}

ojson tree_to_json(const Tree& tree) { return node_to_json(tree, 0); }

void expect_keys(const ojson& j, const std::set<std::string>& allowed,
                 const char* where) {
  if (!j.is_object()) {
    throw format_error(std::string("model file: ") + where +
                       " must be an object");
  }
  for (const auto& item : j.items()) {
    if (!allowed.count(item.key())) {
      throw format_error(std::string("model file: unknown key \"") +
                         item.key() + "\" in " + where);
    }
  }
}

// Appends the subtree rooted at j to tree.nodes in preorder and returns
// its node index.
int node_from_json(const ojson& j, Tree& tree, int depth) {
  if (depth > kMaxTreeDepth) {
    throw format_error("model file: tree nesting exceeds depth limit");
  }
  const int index = static_cast<int>(tree.nodes.size());
  tree.nodes.emplace_back();
  if (j.contains("feature")) {
    expect_keys(j, {"feature", "threshold", "cover", "left", "right"},
                "tree node");
    const int feature = j.at("feature").get<int>();
    if (feature < 0 || feature >= static_cast<int>(kNumFeatures)) {
      throw format_error("model file: tree split feature out of range");
    }
    tree.nodes[static_cast<std::size_t>(index)].feature = feature;
    tree.nodes[static_cast<std::size_t>(index)].threshold =
        j.at("threshold").get<double>();
    tree.nodes[static_cast<std::size_t>(index)].cover =
        j.at("cover").get<double>();
    const int left = node_from_json(j.at("left"), tree, depth + 1);
    const int right = node_from_json(j.at("right"), tree, depth + 1);
    tree.nodes[static_cast<std::size_t>(index)].left = left;
    tree.nodes[static_cast<std::size_t>(index)].right = right;
  } else {
    expect_keys(j, {"value", "cover"}, "tree leaf");
    tree.nodes[static_cast<std::size_t>(index)].value =
        j.at("value").get<double>();
    tree.nodes[static_cast<std::size_t>(index)].cover =
        j.at("cover").get<double>();
  }
  return index;
}

Tree tree_from_json(const ojson& j) {
  Tree tree;
  node_from_json(j, tree, 0);
  return tree;
}

std::vector<double> doubles_from_json(const ojson& j, const char* where) {
  if (!j.is_array()) {
    throw format_error(std::string("model file: ") + where +
                       " must be an array");
  }
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& v : j) out.push_back(v.get<double>());
  return out;
}

}  // namespace

std::string model_to_json(const TrainedModel& model) {
  ojson j;
  j["format_version"] = kModelFormatVersion;
  j["family"] = family_name(model.spec.family);
  ojson hp;
  for (const auto& [k, v] : model.spec.numeric) hp[k] = v;
  j["hyperparameters"] = hp;
  ojson cat;
  for (const auto& [k, v] : model.spec.categorical) cat[k] = v;
  j["categorical"] = cat;
  j["seed"] = model.spec.seed;
  j["feature_names"] = model.feature_names;
  ojson std_j;
  std_j["identity"] = model.standardizer.identity;
  std_j["mean"] = model.standardizer.mean;
  std_j["std"] = model.standardizer.std;
  j["standardizer"] = std_j;
  j["warnings"] = model.warnings;

  switch (model.spec.family) {
    case ModelFamily::gbt:
    case ModelFamily::random_forest: {
      j["base_score"] = model.base_score;
      j["tree_scale"] = model.tree_scale;
      ojson trees = ojson::array();
      for (const auto& t : model.trees) trees.push_back(tree_to_json(t));
      j["trees"] = trees;
      break;
    }
    case ModelFamily::glm:
    case ModelFamily::lda: {
      j["coef"] = model.coef;
      j["intercept"] = model.intercept;
      break;
    }
    case ModelFamily::svm_rbf: {
      ojson sv = ojson::array();
      for (const auto& row : model.sv) sv.push_back(row);
      j["support_vectors"] = sv;
      j["dual_coef"] = model.sv_coef;
      j["bias"] = model.svm_bias;
      j["gamma"] = model.svm_gamma;
      j["platt_a"] = model.platt_a;
      j["platt_b"] = model.platt_b;
      break;
    }
    case ModelFamily::knn: {
      ojson pts = ojson::array();
      for (const auto& row : model.knn_points) pts.push_back(row);
      j["points"] = pts;
      j["labels"] = model.knn_labels;
      break;
    }
  }
  return j.dump(2) + "\n";
}

TrainedModel model_from_json(const std::string& text) {
  ojson j;
  try {
    j = ojson::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw format_error(std::string("model file: invalid JSON: ") + e.what());
  }
  try {
    if (!j.is_object() || !j.contains("format_version")) {
      throw format_error("model file: missing format_version");
    }
    const int version = j.at("format_version").get<int>();
    if (version != kModelFormatVersion) {
      throw format_error("model file: unsupported format_version " +
                         std::to_string(version));
    }

    TrainedModel model;
    model.spec.family = family_from_name(j.at("family").get<std::string>());
    for (const auto& item : j.at("hyperparameters").items()) {
      model.spec.numeric[item.key()] = item.value().get<double>();
    }
    for (const auto& item : j.at("categorical").items()) {
      model.spec.categorical[item.key()] = item.value().get<std::string>();
    }
    model.spec.seed = j.at("seed").get<std::uint64_t>();
    model.feature_names =
        j.at("feature_names").get<std::vector<std::string>>();
    if (model.feature_names != feature_name_vector()) {
      throw format_error("model file: unexpected feature_names");
    }
    const ojson& std_j = j.at("standardizer");
    expect_keys(std_j, {"identity", "mean", "std"}, "standardizer");
    model.standardizer.identity = std_j.at("identity").get<bool>();
    model.standardizer.mean = doubles_from_json(std_j.at("mean"), "mean");
    model.standardizer.std = doubles_from_json(std_j.at("std"), "std");
    if (!model.standardizer.identity &&
        (model.standardizer.mean.size() != kNumFeatures ||
         model.standardizer.std.size() != kNumFeatures)) {
      throw format_error("model file: standardizer length mismatch");
    }
    model.warnings = j.at("warnings").get<std::vector<std::string>>();

    std::set<std::string> allowed = {
        "format_version", "family",        "hyperparameters", "categorical",
        "seed",           "feature_names", "standardizer",    "warnings"};
    switch (model.spec.family) {
      case ModelFamily::gbt:
      case ModelFamily::random_forest: {
        allowed.insert({"base_score", "tree_scale", "trees"});
        expect_keys(j, allowed, "model");
        model.base_score = j.at("base_score").get<double>();
        model.tree_scale = j.at("tree_scale").get<double>();
        for (const auto& t : j.at("trees")) {
          model.trees.push_back(tree_from_json(t));
        }
        if (model.trees.empty()) {
          throw format_error("model file: tree family with no trees");
        }
        break;
      }
      case ModelFamily::glm:
      case ModelFamily::lda: {
        allowed.insert({"coef", "intercept"});
        expect_keys(j, allowed, "model");
        model.coef = doubles_from_json(j.at("coef"), "coef");
        model.intercept = j.at("intercept").get<double>();
        if (model.coef.size() != kNumFeatures) {
          throw format_error("model file: coefficient length mismatch");
        }
        break;
      }
      case ModelFamily::svm_rbf: {
        allowed.insert({"support_vectors", "dual_coef", "bias", "gamma",
                        "platt_a", "platt_b"});
        expect_keys(j, allowed, "model");
        for (const auto& row : j.at("support_vectors")) {
          model.sv.push_back(doubles_from_json(row, "support vector"));
          if (model.sv.back().size() != kNumFeatures) {
            throw format_error("model file: support vector length mismatch");
          }
        }
        model.sv_coef = doubles_from_json(j.at("dual_coef"), "dual_coef");
        if (model.sv_coef.size() != model.sv.size()) {
          throw format_error("model file: dual coefficient count mismatch");
        }
        model.svm_bias = j.at("bias").get<double>();
        model.svm_gamma = j.at("gamma").get<double>();
        model.platt_a = j.at("platt_a").get<double>();
        model.platt_b = j.at("platt_b").get<double>();
        break;
      }
      case ModelFamily::knn: {
        allowed.insert({"points", "labels"});
        expect_keys(j, allowed, "model");
        for (const auto& row : j.at("points")) {
          model.knn_points.push_back(doubles_from_json(row, "point"));
          if (model.knn_points.back().size() != kNumFeatures) {
            throw format_error("model file: point length mismatch");
          }
        }
        model.knn_labels = j.at("labels").get<std::vector<int>>();
        if (model.knn_labels.size() != model.knn_points.size()) {
          throw format_error("model file: label count mismatch");
        }
        if (model.knn_points.empty()) {
          throw format_error("model file: neighbor table is empty");
        }
        break;
      }
    }
    try {
      validate_spec(model.spec);
    } catch (const config_error& e) {
      throw format_error(std::string("model file: ") + e.what());
    }
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw format_error(std::string("model file: ") + e.what());
  }
}

void save_model(const TrainedModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw error("cannot open " + path.string() + " for writing");
  }
  out << model_to_json(model);
  if (!out) {
    throw error("failed writing " + path.string());
  }
}

TrainedModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw format_error("model file: cannot open " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return model_from_json(buf.str());
}

}  // namespace stresskit
