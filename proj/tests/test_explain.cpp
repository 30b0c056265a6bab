#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "doctest.h"
#include "stresskit/error.hpp"
#include "stresskit/explain.hpp"
#include "stresskit/model.hpp"
#include "stresskit/rng.hpp"
#include "stresskit/types.hpp"

using namespace stresskit;

namespace {

Tree leaf_only(double value, double cover) {
  Tree tree;
  TreeNode node;
  node.value = value;
  node.cover = cover;
  tree.nodes.push_back(node);
  return tree;
}

// Depth-1 stump: split feature `f` at `threshold`, left/right leaf values
// and covers given explicitly.
Tree stump(int f, double threshold, double left_value, double right_value,
           double left_cover, double right_cover) {
  Tree tree;
  tree.nodes.resize(3);
  tree.nodes[0].feature = f;
  tree.nodes[0].threshold = threshold;
  tree.nodes[0].left = 1;
  tree.nodes[0].right = 2;
  tree.nodes[0].cover = left_cover + right_cover;
  tree.nodes[1].value = left_value;
  tree.nodes[1].cover = left_cover;
  tree.nodes[2].value = right_value;
  tree.nodes[2].cover = right_cover;
  return tree;
}

// Random tree over `d` features with integer covers and bounded depth,
// built in preorder like the real trainer output.
int grow_random(Tree& tree, Rng& rng, int depth_left, std::int64_t cover,
                int d) {
  const int index = static_cast<int>(tree.nodes.size());
  tree.nodes.emplace_back();
  if (depth_left == 0 || cover < 2 || rng.next_double() < 0.3) {
    tree.nodes[static_cast<std::size_t>(index)].value =
        rng.next_uniform(-2.0, 2.0);
    tree.nodes[static_cast<std::size_t>(index)].cover =
        static_cast<double>(cover);
    return index;
  }
  const int feature = static_cast<int>(rng.next_below(
      static_cast<std::uint64_t>(d)));
  const double threshold = rng.next_uniform(-1.0, 1.0);
  const std::int64_t left_cover =
      1 + static_cast<std::int64_t>(rng.next_below(
              static_cast<std::uint64_t>(cover - 1)));
  const int left = grow_random(tree, rng, depth_left - 1, left_cover, d);
  const int right =
      grow_random(tree, rng, depth_left - 1, cover - left_cover, d);
  TreeNode& node = tree.nodes[static_cast<std::size_t>(index)];
  node.feature = feature;
  node.threshold = threshold;
  node.left = left;
  node.right = right;
  node.cover = static_cast<double>(cover);
  return index;
}

Tree random_tree(Rng& rng, int d, int max_depth) {
  Tree tree;
  grow_random(tree, rng, max_depth, 64 + static_cast<std::int64_t>(
                                             rng.next_below(960)),
              d);
  return tree;
}

std::vector<FeatureVector> cluster_rows(int participants, int rows_each,
                                        double shift, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<FeatureVector> rows;
  for (int p = 0; p < participants; ++p) {
    const std::string pid = "p" + std::to_string(p);
    for (int r = 0; r < rows_each; ++r) {
      const bool stress = r % 2 == 0;
      FeatureVector row;
      row.participant_id = pid;
      row.label = stress ? Label::stress : Label::nonstress;
      for (std::size_t c = 0; c < kNumFeatures; ++c) {
        row.v[c] = rng.next_normal();
      }
      if (stress) {
        row.v[2] += shift;
        row.v[3] += shift;
      }
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace

TEST_SUITE("explain") {
  TEST_CASE("single-leaf tree attributes nothing") {
    const Tree tree = leaf_only(3.5, 10.0);
    std::array<double, 4> x{0.0, 1.0, 2.0, 3.0};
    for (double phi : tree_shap_single(tree, x.data(), 4)) CHECK(phi == 0.0);
    for (double phi : brute_force_shapley(tree, x.data(), 4)) {
      CHECK(phi == 0.0);
    }
  }

  TEST_CASE("hand-computed stump attribution") {
    // Equal-cover split on column 3 with leaves -1/+1: an input on the
    // high side receives exactly +1 on that column, zero elsewhere.
    const Tree tree = stump(3, 10.0, -1.0, 1.0, 50.0, 50.0);
    std::array<double, kNumFeatures> x{};
    x[3] = 20.0;
    const auto phi = tree_shap_single(tree, x.data(), kNumFeatures);
    for (std::size_t f = 0; f < kNumFeatures; ++f) {
      CHECK(phi[f] == (f == 3 ? 1.0 : 0.0));
    }
    CHECK(tree.expected_value() == 0.0);

    const auto oracle = brute_force_shapley(tree, x.data(), kNumFeatures);
    for (std::size_t f = 0; f < kNumFeatures; ++f) {
      CHECK(std::fabs(phi[f] - oracle[f]) < 1e-12);
    }

    // Low-side input mirrors to -1.
    x[3] = -4.0;
    const auto low = tree_shap_single(tree, x.data(), kNumFeatures);
    CHECK(low[3] == -1.0);
  }

  TEST_CASE("unequal covers shift the baseline share") {
    // 80/20 covers: expectation is 0.6 toward the heavy leaf, and the
    // single active feature carries margin minus expectation.
    const Tree tree = stump(0, 0.0, -1.0, 1.0, 80.0, 20.0);
    std::array<double, 2> x{1.0, 0.0};
    const auto phi = tree_shap_single(tree, x.data(), 2);
    const double expected = tree.expected_value();
    CHECK(expected == doctest::Approx(-0.6).epsilon(1e-15));
    CHECK(phi[0] == doctest::Approx(1.0 - expected).epsilon(1e-12));
    CHECK(phi[1] == 0.0);
    const auto oracle = brute_force_shapley(tree, x.data(), 2);
    CHECK(std::fabs(phi[0] - oracle[0]) < 1e-12);
  }

  TEST_CASE("interchangeable features receive equal attribution") {
    // value = [f0 > 0] + [f1 > 0] built symmetrically with equal covers.
    Tree tree;
    tree.nodes.resize(7);
    auto internal = [&](int i, int f, int left, int right, double cover) {
      tree.nodes[i].feature = f;
      tree.nodes[i].threshold = 0.0;
      tree.nodes[i].left = left;
      tree.nodes[i].right = right;
      tree.nodes[i].cover = cover;
    };
    auto leaf = [&](int i, double value, double cover) {
      tree.nodes[i].value = value;
      tree.nodes[i].cover = cover;
    };
    internal(0, 0, 1, 4, 100.0);
    internal(1, 1, 2, 3, 50.0);
    leaf(2, 0.0, 25.0);
    leaf(3, 1.0, 25.0);
    internal(4, 1, 5, 6, 50.0);
    leaf(5, 1.0, 25.0);
    leaf(6, 2.0, 25.0);

    std::array<double, 2> x{1.0, 1.0};
    const auto phi = tree_shap_single(tree, x.data(), 2);
    CHECK(std::fabs(phi[0] - phi[1]) < 1e-12);
    const auto oracle = brute_force_shapley(tree, x.data(), 2);
    CHECK(std::fabs(phi[0] - oracle[0]) < 1e-12);
    CHECK(std::fabs(phi[1] - oracle[1]) < 1e-12);
    // Sanity: both features push up from the 1.0 expectation to 2.0.
    CHECK(tree.predict(x.data()) == 2.0);
    CHECK(std::fabs(phi[0] + phi[1] - (2.0 - tree.expected_value())) < 1e-12);
  }

  TEST_CASE("brute-force oracle equivalence on random trees") {
    Rng rng(0xdecaf);
    const int d = 4;
    for (int iteration = 0; iteration < 150; ++iteration) {
      const Tree tree = random_tree(rng, d, 3);
      for (int rep = 0; rep < 2; ++rep) {
        std::array<double, 4> x{};
        for (auto& value : x) value = rng.next_uniform(-1.5, 1.5);
        const auto fast = tree_shap_single(tree, x.data(), d);
        const auto oracle = brute_force_shapley(tree, x.data(), d);
        double total = 0.0;
        for (int f = 0; f < d; ++f) {
          CHECK(std::fabs(fast[static_cast<std::size_t>(f)] -
                          oracle[static_cast<std::size_t>(f)]) < 1e-9);
          total += fast[static_cast<std::size_t>(f)];
        }
        const double margin_gap =
            tree.predict(x.data()) - tree.expected_value();
        CHECK(std::fabs(total - margin_gap) < 1e-9);
      }
    }
  }

  TEST_CASE("features outside every split get exactly zero") {
    Rng rng(505);
    for (int iteration = 0; iteration < 40; ++iteration) {
      const Tree tree = random_tree(rng, 2, 3);  // splits only on 0 and 1
      std::array<double, 4> x{};
      for (auto& value : x) value = rng.next_uniform(-1.5, 1.5);
      const auto fast = tree_shap_single(tree, x.data(), 4);
      const auto oracle = brute_force_shapley(tree, x.data(), 4);
      CHECK(fast[2] == 0.0);
      CHECK(fast[3] == 0.0);
      CHECK(oracle[2] == 0.0);
      CHECK(oracle[3] == 0.0);
    }
  }

  TEST_CASE("oracle refuses more than 16 features") {
    const Tree tree = leaf_only(1.0, 5.0);
    std::vector<double> x(17, 0.0);
    CHECK_THROWS_AS((void)brute_force_shapley(tree, x.data(), 17),
                    explain_error);
  }

  TEST_CASE("ensemble local accuracy for gbt and random forest") {
    const auto rows = cluster_rows(6, 30, 2.0, 808);
    ModelSpec gbt = default_spec(ModelFamily::gbt, 4);
    gbt.numeric["n_estimators"] = 30;
    ModelSpec forest = default_spec(ModelFamily::random_forest, 5);
    forest.numeric["n_trees"] = 40;
    forest.numeric["max_depth"] = 4;

    Rng rng(190);
    for (const auto& spec : {gbt, forest}) {
      const TrainedModel model = train_model(spec, rows);
      for (int iteration = 0; iteration < 200; ++iteration) {
        std::array<double, kNumFeatures> x{};
        for (auto& value : x) value = rng.next_uniform(-3.0, 5.0);
        const ShapRow shap = tree_shap(model, x);
        double total = shap.base_value;
        for (double phi : shap.shap) total += phi;
        CHECK(std::fabs(total - model.margin(x)) < 1e-9);
      }
    }
  }

  TEST_CASE("non-tree families are rejected") {
    const auto rows = cluster_rows(4, 10, 2.0, 11);
    const TrainedModel glm =
        train_model(default_spec(ModelFamily::glm, 1), rows);
    std::array<double, kNumFeatures> x{};
    CHECK_THROWS_AS((void)tree_shap(glm, x), explain_error);
    CHECK_THROWS_AS((void)shap_summary(glm, rows), explain_error);
  }

  TEST_CASE("summary ranks a planted single feature first") {
    // Only column 3 carries signal; every other column is constant, so
    // no tree can split on them and their importance is exactly zero.
    std::vector<FeatureVector> rows;
    Rng rng(31);
    for (int i = 0; i < 120; ++i) {
      FeatureVector row;
      row.participant_id = "p" + std::to_string(i % 4);
      const double value = rng.next_uniform(0.0, 10.0);
      row.v[3] = value;
      row.label = value > 5.0 ? Label::stress : Label::nonstress;
      rows.push_back(row);
    }
    ModelSpec spec = default_spec(ModelFamily::gbt, 2);
    spec.numeric["n_estimators"] = 25;
    const TrainedModel model = train_model(spec, rows);
    const ShapSummary summary = shap_summary(model, rows);

    REQUIRE(summary.entries.size() == kNumFeatures);
    CHECK(summary.entries[0].feature == "std_hr");
    CHECK(summary.entries[0].feature_index == 3);
    CHECK(summary.entries[0].rank == 1);
    CHECK(summary.entries[0].mean_abs_shap > 0.0);
    for (std::size_t i = 1; i < summary.entries.size(); ++i) {
      CHECK(summary.entries[i].mean_abs_shap == 0.0);
      CHECK(summary.entries[i].rank == i + 1);
    }
    // Ties (all the zero-importance features) keep feature-column order.
    std::vector<std::size_t> tied;
    for (std::size_t i = 1; i < summary.entries.size(); ++i) {
      tied.push_back(summary.entries[i].feature_index);
    }
    CHECK(std::is_sorted(tied.begin(), tied.end()));

    // Monotone model: dependence pairs ordered by std_hr have
    // non-decreasing shap values.
    const auto dependence = shap_dependence("std_hr", summary.rows);
    REQUIRE(dependence.size() == rows.size());
    for (std::size_t i = 0; i + 1 < dependence.size(); ++i) {
      CHECK(dependence[i].feature_value <= dependence[i + 1].feature_value);
      CHECK(dependence[i].shap_value <= dependence[i + 1].shap_value + 1e-12);
    }
    // Ignored feature: all-zero dependence.
    for (const auto& point : shap_dependence("mean_acc", summary.rows)) {
      CHECK(point.shap_value == 0.0);
    }
  }

  TEST_CASE("summary of a single row is that row's attribution") {
    const auto rows = cluster_rows(4, 10, 2.0, 99);
    ModelSpec spec = default_spec(ModelFamily::gbt, 3);
    spec.numeric["n_estimators"] = 10;
    const TrainedModel model = train_model(spec, rows);
    const std::vector<FeatureVector> one(rows.begin(), rows.begin() + 1);
    const ShapSummary summary = shap_summary(model, one);
    REQUIRE(summary.rows.size() == 1);
    for (const auto& entry : summary.entries) {
      CHECK(entry.mean_abs_shap ==
            std::fabs(summary.rows[0].shap[entry.feature_index]));
    }
  }

  TEST_CASE("summary and dependence input validation") {
    const auto rows = cluster_rows(4, 10, 2.0, 7);
    const TrainedModel model =
        train_model(default_spec(ModelFamily::random_forest, 1), rows);
    CHECK_THROWS_AS((void)shap_summary(model, {}), explain_error);
    const ShapSummary summary = shap_summary(model, rows);
    CHECK_THROWS_AS((void)shap_dependence("not_a_feature", summary.rows),
                    explain_error);
    CHECK(shap_dependence("min_hr", summary.rows).size() == rows.size());
  }
}
