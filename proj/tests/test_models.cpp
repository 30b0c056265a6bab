#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "stresskit/error.hpp"
#include "stresskit/model.hpp"
#include "stresskit/rng.hpp"

using namespace stresskit;

namespace {

FeatureVector make_row(std::string pid, Label label, std::array<double, kNumFeatures> v) {
  FeatureVector f;
  f.participant_id = std::move(pid);
  f.label = label;
  f.v = v;
  return f;
}

// Two 10-D gaussian blobs: stress rows shifted by +delta in columns 2, 3, 8.
std::vector<FeatureVector> blob_rows(std::size_t n, double delta, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<FeatureVector> rows;
  for (std::size_t i = 0; i < n; ++i) {
    FeatureVector f;
    f.participant_id = "p" + std::to_string(i % 4);
    f.label = i % 2 ? Label::stress : Label::nonstress;
    for (auto& v : f.v) v = rng.next_normal();
    if (f.label == Label::stress) {
      f.v[2] += delta;
      f.v[3] += delta;
      f.v[8] += delta;
    }
    rows.push_back(f);
  }
  return rows;
}

double train_accuracy(const TrainedModel& model, const std::vector<FeatureVector>& rows) {
  std::size_t correct = 0;
  for (const auto& row : rows) {
    const int predicted = model.score(row) >= 0.5 ? 1 : 0;
    correct += predicted == label_value(row.label);
  }
  return static_cast<double>(correct) / static_cast<double>(rows.size());
}

// Independent tree walk used as the margin oracle.
double walk_tree(const Tree& tree, const std::array<double, kNumFeatures>& x) {
  const TreeNode* node = &tree.nodes[0];
  while (!node->is_leaf()) {
    node = &tree.nodes[static_cast<std::size_t>(
        x[static_cast<std::size_t>(node->feature)] <= node->threshold ? node->left
                                                                      : node->right)];
  }
  return node->value;
}

double oracle_margin(const TrainedModel& model, const std::array<double, kNumFeatures>& x) {
  double sum = 0.0;
  for (const auto& tree : model.trees) sum += walk_tree(tree, x);
  return model.base_score + model.tree_scale * sum;
}

std::array<double, kNumFeatures> random_point(Rng& rng, double scale) {
  std::array<double, kNumFeatures> x;
  for (auto& v : x) v = scale * rng.next_normal();
  return x;
}

void check_tree_covers(const Tree& tree) {
  for (const auto& node : tree.nodes) {
    if (node.is_leaf()) continue;
    const double child_sum = tree.nodes[static_cast<std::size_t>(node.left)].cover +
                             tree.nodes[static_cast<std::size_t>(node.right)].cover;
    CHECK(node.cover == child_sum);
  }
}

}  // namespace

TEST_SUITE("models") {

TEST_CASE("validate_spec rejects unknown names and bad ranges") {
  auto spec = default_spec(ModelFamily::gbt, 1);
  CHECK_NOTHROW(validate_spec(spec));
  spec.numeric["bogus"] = 1.0;
  CHECK_THROWS_AS(validate_spec(spec), config_error);
  spec.numeric.erase("bogus");
  spec.numeric["learning_rate"] = 1.5;
  CHECK_THROWS_AS(validate_spec(spec), config_error);
  spec.numeric["learning_rate"] = 0.1;
  spec.numeric["n_estimators"] = 2.5;
  CHECK_THROWS_AS(validate_spec(spec), config_error);
  spec.numeric["n_estimators"] = 100;
  spec.categorical["loss"] = "hinge";
  CHECK_THROWS_AS(validate_spec(spec), config_error);

  auto knn = default_spec(ModelFamily::knn, 1);
  knn.numeric["k"] = 0;
  CHECK_THROWS_AS(validate_spec(knn), config_error);

  for (auto family : {ModelFamily::gbt, ModelFamily::random_forest, ModelFamily::glm,
                      ModelFamily::lda, ModelFamily::svm_rbf, ModelFamily::knn}) {
    CHECK_NOTHROW(validate_spec(default_spec(family, 7)));
  }
}

TEST_CASE("gbt separates a threshold rule perfectly") {
  // stress iff std_hr > 10; all other columns zero.
  std::vector<FeatureVector> rows;
  Rng rng(3);
  for (int i = 0; i < 80; ++i) {
    std::array<double, kNumFeatures> v{};
    const bool stress = i % 2 == 0;
    v[feat::std_hr] = stress ? 10.5 + 5.0 * rng.next_double() : 9.5 - 5.0 * rng.next_double();
    rows.push_back(make_row("p" + std::to_string(i % 3),
                            stress ? Label::stress : Label::nonstress, v));
  }
  auto spec = default_spec(ModelFamily::gbt, 5);
  spec.numeric["n_estimators"] = 50;
  spec.numeric["max_depth"] = 3;
  for (const char* loss : {"deviance", "exponential"}) {
    spec.categorical["loss"] = loss;
    const auto model = train_model(spec, rows);
    CHECK(train_accuracy(model, rows) == 1.0);
  }
}

TEST_CASE("gbt refuses single-label training data") {
  std::vector<FeatureVector> rows;
  for (int i = 0; i < 10; ++i) {
    std::array<double, kNumFeatures> v{};
    v[0] = i;
    rows.push_back(make_row("p", Label::nonstress, v));
  }
  auto spec = default_spec(ModelFamily::gbt, 1);
  CHECK_THROWS_AS(train_model(spec, rows), train_error);
  spec.categorical["loss"] = "exponential";
  CHECK_THROWS_AS(train_model(spec, rows), train_error);
}

TEST_CASE("the published best configuration is accepted outside the grid values") {
  auto spec = default_spec(ModelFamily::gbt, 2);
  spec.categorical["loss"] = "deviance";
  spec.categorical["criterion"] = "mse";
  spec.numeric["n_estimators"] = 20;
  spec.numeric["max_depth"] = 7;
  CHECK_NOTHROW(validate_spec(spec));
  const auto model = train_model(spec, blob_rows(60, 2.0, 8));
  CHECK(model.trees.size() == 20);
}

TEST_CASE("gbt training log-loss is non-increasing per deviance stage") {
  const auto rows = blob_rows(120, 1.0, 17);
  auto spec = default_spec(ModelFamily::gbt, 4);
  spec.numeric["n_estimators"] = 40;
  const auto model = train_model(spec, rows);

  std::vector<double> margins(rows.size(), model.base_score);
  auto log_loss = [&] {
    double total = 0.0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const double p = sigmoid(margins[i]);
      const double y = label_value(rows[i].label);
      total += -(y * std::log(std::max(p, 1e-300)) +
                 (1.0 - y) * std::log(std::max(1.0 - p, 1e-300)));
    }
    return total / static_cast<double>(rows.size());
  };

  double previous = log_loss();
  for (const auto& tree : model.trees) {
    for (std::size_t i = 0; i < rows.size(); ++i) {
      margins[i] += model.tree_scale * tree.predict(rows[i].v.data());
    }
    const double current = log_loss();
    CHECK(current <= previous + 1e-12);
    previous = current;
  }
}

TEST_CASE("tree family margins match an independent tree walk on 1000 points") {
  const auto rows = blob_rows(150, 1.5, 29);
  auto gbt_spec = default_spec(ModelFamily::gbt, 6);
  gbt_spec.numeric["n_estimators"] = 30;
  auto rf_spec = default_spec(ModelFamily::random_forest, 6);
  rf_spec.numeric["n_trees"] = 25;

  Rng rng(61);
  for (const auto& model : {train_model(gbt_spec, rows), train_model(rf_spec, rows)}) {
    for (int i = 0; i < 1000; ++i) {
      const auto x = random_point(rng, 3.0);
      CHECK(model.margin(x) == oracle_margin(model, x));
    }
    for (const auto& tree : model.trees) check_tree_covers(tree);
  }
}

TEST_CASE("random forest with one tree on single-label data scores the class fraction") {
  std::vector<FeatureVector> rows;
  for (int i = 0; i < 12; ++i) {
    std::array<double, kNumFeatures> v{};
    v[1] = i % 5;
    rows.push_back(make_row("p", Label::stress, v));
  }
  auto spec = default_spec(ModelFamily::random_forest, 9);
  spec.numeric["n_trees"] = 1;
  const auto model = train_model(spec, rows);
  Rng rng(77);
  for (int i = 0; i < 20; ++i) CHECK(model.score(random_point(rng, 4.0)) == 1.0);
}

TEST_CASE("random forest overfits separable data") {
  const auto rows = blob_rows(200, 2.5, 31);
  const auto model = train_model(default_spec(ModelFamily::random_forest, 13), rows);
  CHECK(train_accuracy(model, rows) >= 0.99);
}

TEST_CASE("same seed gives an identical forest, different seed diverges") {
  const auto rows = blob_rows(80, 1.0, 37);
  auto spec = default_spec(ModelFamily::random_forest, 21);
  spec.numeric["n_trees"] = 10;
  const auto a = train_model(spec, rows);
  const auto b = train_model(spec, rows);
  REQUIRE(a.trees.size() == b.trees.size());
  for (std::size_t t = 0; t < a.trees.size(); ++t) {
    REQUIRE(a.trees[t].nodes.size() == b.trees[t].nodes.size());
    for (std::size_t k = 0; k < a.trees[t].nodes.size(); ++k) {
      CHECK(a.trees[t].nodes[k].feature == b.trees[t].nodes[k].feature);
      CHECK(a.trees[t].nodes[k].threshold == b.trees[t].nodes[k].threshold);
      CHECK(a.trees[t].nodes[k].value == b.trees[t].nodes[k].value);
    }
  }
  spec.seed = 22;
  const auto c = train_model(spec, rows);
  Rng rng(5);
  bool any_diff = false;
  for (int i = 0; i < 50 && !any_diff; ++i) {
    const auto x = random_point(rng, 2.0);
    any_diff = a.score(x) != c.score(x);
  }
  CHECK(any_diff);
}

TEST_CASE("glm intercept vanishes on origin-mirrored data") {
  Rng rng(41);
  std::vector<FeatureVector> rows;
  for (int i = 0; i < 200; ++i) {
    std::array<double, kNumFeatures> v;
    for (auto& value : v) value = rng.next_normal() + 0.4;
    rows.push_back(make_row("a", Label::stress, v));
    std::array<double, kNumFeatures> mirrored;
    for (std::size_t j = 0; j < kNumFeatures; ++j) mirrored[j] = -v[j];
    rows.push_back(make_row("b", Label::nonstress, mirrored));
  }
  const auto model = train_model(default_spec(ModelFamily::glm, 1), rows);
  CHECK(std::abs(model.intercept) < 1e-6);
}

TEST_CASE("glm recovers a known 1-D logit slope and matches a direct optimizer") {
  const std::size_t n = 100000;
  Rng rng(53);
  std::vector<FeatureVector> rows;
  std::vector<double> xs(n);
  std::vector<int> ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = rng.next_uniform(-3.0, 3.0);
    const int y = rng.next_double() < sigmoid(2.0 * x) ? 1 : 0;
    xs[i] = x;
    ys[i] = y;
    // Only column 0 carries signal; the rest stay exactly zero so the
    // 10-column fit coincides with the 2-parameter problem the oracle solves.
    std::array<double, kNumFeatures> v{};
    v[0] = x;
    rows.push_back(make_row("p", y ? Label::stress : Label::nonstress, v));
  }
  const auto model = train_model(default_spec(ModelFamily::glm, 1), rows);
  const double raw_slope = model.coef[0] / model.standardizer.std[0];
  CHECK(raw_slope > 1.9);
  CHECK(raw_slope < 2.1);

  // Independent oracle: Newton iterations on the raw-space two-parameter
  // log-likelihood (intercept, slope).
  double b0 = 0.0, b1 = 0.0;
  for (int iter = 0; iter < 50; ++iter) {
    double g0 = 0, g1 = 0, h00 = 0, h01 = 0, h11 = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double p = sigmoid(b0 + b1 * xs[i]);
      const double r = ys[i] - p;
      const double w = p * (1.0 - p);
      g0 += r;
      g1 += r * xs[i];
      h00 += w;
      h01 += w * xs[i];
      h11 += w * xs[i] * xs[i];
    }
    const double det = h00 * h11 - h01 * h01;
    const double d0 = (h11 * g0 - h01 * g1) / det;
    const double d1 = (-h01 * g0 + h00 * g1) / det;
    b0 += d0;
    b1 += d1;
    if (std::max(std::abs(d0), std::abs(d1)) < 1e-12) break;
  }
  CHECK(raw_slope == doctest::Approx(b1).epsilon(1e-4));
}

TEST_CASE("glm warns instead of diverging on separable data") {
  std::vector<FeatureVector> rows;
  for (int i = 0; i < 40; ++i) {
    std::array<double, kNumFeatures> v{};
    const bool stress = i % 2 == 0;
    v[0] = stress ? 1.0 + 0.1 * i : -1.0 - 0.1 * i;
    rows.push_back(make_row("p", stress ? Label::stress : Label::nonstress, v));
  }
  const auto model = train_model(default_spec(ModelFamily::glm, 1), rows);
  CHECK(!model.warnings.empty());
  CHECK(train_accuracy(model, rows) == 1.0);
}

TEST_CASE("lda boundary bisects two mirrored gaussians") {
  Rng rng(59);
  std::vector<FeatureVector> rows;
  for (int i = 0; i < 300; ++i) {
    std::array<double, kNumFeatures> v;
    for (auto& value : v) value = rng.next_normal();
    v[0] += 2.0;
    v[4] += 1.0;
    rows.push_back(make_row("a", Label::stress, v));
    std::array<double, kNumFeatures> m;
    for (std::size_t j = 0; j < kNumFeatures; ++j) m[j] = -v[j];
    rows.push_back(make_row("b", Label::nonstress, m));
  }
  const auto model = train_model(default_spec(ModelFamily::lda, 1), rows);
  const std::array<double, kNumFeatures> origin{};
  CHECK(std::abs(model.score(origin) - 0.5) < 1e-6);
}

TEST_CASE("lda trains through duplicate constant features") {
  auto rows = blob_rows(80, 1.0, 67);
  for (auto& row : rows) {
    row.v[6] = 5.0;
    row.v[7] = 5.0;
  }
  const auto model = train_model(default_spec(ModelFamily::lda, 1), rows);
  Rng rng(68);
  for (int i = 0; i < 10; ++i) {
    const double s = model.score(random_point(rng, 1.0));
    CHECK(std::isfinite(s));
    CHECK(s >= 0.0);
    CHECK(s <= 1.0);
  }
}

TEST_CASE("lda weights match an independent gauss-jordan solve") {
  // Three informative columns; the rest constant so the problem is 3-D.
  Rng rng(71);
  std::vector<FeatureVector> rows;
  for (int i = 0; i < 120; ++i) {
    std::array<double, kNumFeatures> v{};
    const bool stress = i % 3 == 0;
    v[1] = rng.next_normal() + (stress ? 1.0 : 0.0);
    v[5] = 0.5 * rng.next_normal() + (stress ? -0.7 : 0.0);
    v[9] = 2.0 * rng.next_normal();
    rows.push_back(make_row("p" + std::to_string(i % 2),
                            stress ? Label::stress : Label::nonstress, v));
  }
  const double shrinkage = 1e-6;
  const auto model = train_model(default_spec(ModelFamily::lda, 1), rows);

  // Oracle: accumulate pooled covariance over standardized rows and invert
  // by gauss-jordan with partial pivoting (a different solver).
  const std::size_t d = kNumFeatures;
  std::vector<std::vector<double>> xs;
  std::vector<int> ys;
  for (const auto& row : rows) {
    xs.push_back(model.standardizer.apply(row.v));
    ys.push_back(label_value(row.label));
  }
  std::vector<double> mu0(d, 0.0), mu1(d, 0.0);
  double n0 = 0, n1 = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (ys[i]) {
      n1 += 1;
      for (std::size_t j = 0; j < d; ++j) mu1[j] += xs[i][j];
    } else {
      n0 += 1;
      for (std::size_t j = 0; j < d; ++j) mu0[j] += xs[i][j];
    }
  }
  for (std::size_t j = 0; j < d; ++j) {
    mu0[j] /= n0;
    mu1[j] /= n1;
  }
  std::vector<std::vector<double>> s(d, std::vector<double>(d, 0.0));
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const auto& mu = ys[i] ? mu1 : mu0;
    for (std::size_t j = 0; j < d; ++j) {
      for (std::size_t k = 0; k < d; ++k) {
        s[j][k] += (xs[i][j] - mu[j]) * (xs[i][k] - mu[k]);
      }
    }
  }
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t k = 0; k < d; ++k) s[j][k] /= (n0 + n1 - 2);
    s[j][j] += shrinkage;
  }
  // Gauss-jordan inversion.
  std::vector<std::vector<double>> inv(d, std::vector<double>(d, 0.0));
  for (std::size_t j = 0; j < d; ++j) inv[j][j] = 1.0;
  for (std::size_t col = 0; col < d; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < d; ++r) {
      if (std::abs(s[r][col]) > std::abs(s[pivot][col])) pivot = r;
    }
    std::swap(s[col], s[pivot]);
    std::swap(inv[col], inv[pivot]);
    const double diag = s[col][col];
    for (std::size_t c = 0; c < d; ++c) {
      s[col][c] /= diag;
      inv[col][c] /= diag;
    }
    for (std::size_t r = 0; r < d; ++r) {
      if (r == col) continue;
      const double factor = s[r][col];
      for (std::size_t c = 0; c < d; ++c) {
        s[r][c] -= factor * s[col][c];
        inv[r][c] -= factor * inv[col][c];
      }
    }
  }
  for (std::size_t j = 0; j < d; ++j) {
    double w = 0.0;
    for (std::size_t k = 0; k < d; ++k) w += inv[j][k] * (mu1[k] - mu0[k]);
    CHECK(model.coef[j] == doctest::Approx(w).epsilon(1e-7));
  }
}

TEST_CASE("svm with rbf kernel solves xor") {
  std::vector<FeatureVector> rows;
  const double points[4][2] = {{0, 0}, {1, 1}, {0, 1}, {1, 0}};
  for (int i = 0; i < 4; ++i) {
    std::array<double, kNumFeatures> v{};
    v[0] = points[i][0];
    v[1] = points[i][1];
    rows.push_back(make_row("p" + std::to_string(i), i < 2 ? Label::nonstress : Label::stress, v));
  }
  auto spec = default_spec(ModelFamily::svm_rbf, 1);
  spec.numeric["C"] = 100.0;
  const auto model = train_model(spec, rows);
  CHECK(train_accuracy(model, rows) == 1.0);
}

TEST_CASE("svm satisfies the kkt conditions at termination") {
  const auto rows = blob_rows(60, 1.2, 101);
  auto spec = default_spec(ModelFamily::svm_rbf, 3);
  const auto model = train_model(spec, rows);
  CHECK(model.warnings.empty());

  const double c_bound = spec.num("C");
  const double tol = spec.num("tol");
  const auto canon = canonical_order(rows);

  auto decision = [&](const std::vector<double>& xs) {
    double f = model.svm_bias;
    for (std::size_t s = 0; s < model.sv.size(); ++s) {
      double dist2 = 0.0;
      for (std::size_t j = 0; j < kNumFeatures; ++j) {
        const double dv = model.sv[s][j] - xs[j];
        dist2 += dv * dv;
      }
      f += model.sv_coef[s] * std::exp(-model.svm_gamma * dist2);
    }
    return f;
  };

  for (const auto& row : canon) {
    const auto xs = model.standardizer.apply(row.v);
    // Recover this row's multiplier by matching it against the stored
    // support vectors (standardization is deterministic, so equality is exact).
    double alpha = 0.0;
    for (std::size_t s = 0; s < model.sv.size(); ++s) {
      if (model.sv[s] == xs) {
        alpha = std::abs(model.sv_coef[s]);
        break;
      }
    }
    const double y = row.label == Label::stress ? 1.0 : -1.0;
    const double r = y * decision(xs) - 1.0;
    if (alpha < c_bound - 1e-9) CHECK(r >= -tol - 1e-9);
    if (alpha > 1e-9) CHECK(r <= tol + 1e-9);
  }
}

TEST_CASE("svm keeps multipliers bounded on contradictory duplicates") {
  auto rows = blob_rows(30, 1.0, 103);
  FeatureVector twin = rows[0];
  twin.label = rows[0].label == Label::stress ? Label::nonstress : Label::stress;
  rows.push_back(twin);
  auto spec = default_spec(ModelFamily::svm_rbf, 5);
  const auto model = train_model(spec, rows);
  for (double coef : model.sv_coef) {
    CHECK(std::abs(coef) <= spec.num("C") + 1e-9);
  }
}

TEST_CASE("knn memorizes: k=1 returns the training label") {
  const auto rows = blob_rows(40, 1.5, 107);
  auto spec = default_spec(ModelFamily::knn, 1);
  spec.numeric["k"] = 1;
  const auto model = train_model(spec, rows);
  for (const auto& row : rows) {
    CHECK(model.score(row) == static_cast<double>(label_value(row.label)));
  }
}

TEST_CASE("knn with k=n scores the global stress fraction everywhere") {
  const auto rows = blob_rows(40, 1.5, 109);
  auto spec = default_spec(ModelFamily::knn, 1);
  spec.numeric["k"] = 40;
  const auto model = train_model(spec, rows);
  double stress = 0.0;
  for (const auto& row : rows) stress += label_value(row.label);
  const double fraction = stress / static_cast<double>(rows.size());
  Rng rng(110);
  for (int i = 0; i < 10; ++i) {
    CHECK(model.score(random_point(rng, 2.0)) == doctest::Approx(fraction).epsilon(1e-12));
  }
}

TEST_CASE("knn distance ties break toward the lower row index") {
  // Canonical row order sorts by feature values: x = -1, 0, 1.
  std::vector<FeatureVector> rows;
  std::array<double, kNumFeatures> v{};
  v[0] = -1.0;
  rows.push_back(make_row("p", Label::stress, v));
  v[0] = 0.0;
  rows.push_back(make_row("p", Label::stress, v));
  v[0] = 1.0;
  rows.push_back(make_row("p", Label::nonstress, v));

  auto spec = default_spec(ModelFamily::knn, 1);
  spec.numeric["k"] = 2;
  const auto model = train_model(spec, rows);
  // Query at 0: nearest is x=0, then x=-1 and x=1 tie; the lower canonical
  // index (x=-1, stress) must win, giving (1+1)/2.
  std::array<double, kNumFeatures> q{};
  CHECK(model.score(q) == 1.0);
}

TEST_CASE("knn k bounds") {
  const auto rows = blob_rows(10, 1.0, 113);
  auto spec = default_spec(ModelFamily::knn, 1);
  spec.numeric["k"] = 11;
  CHECK_THROWS_AS(train_model(spec, rows), train_error);
}

TEST_CASE("every family scores in [0,1] and ignores training row order") {
  const auto rows = blob_rows(60, 1.0, 127);
  std::vector<FeatureVector> shuffled = rows;
  Rng shuffle_rng(128);
  shuffle(shuffled, shuffle_rng);

  Rng rng(129);
  std::vector<std::array<double, kNumFeatures>> queries;
  for (int i = 0; i < 25; ++i) queries.push_back(random_point(rng, 2.0));

  for (auto family : {ModelFamily::gbt, ModelFamily::random_forest, ModelFamily::glm,
                      ModelFamily::lda, ModelFamily::svm_rbf, ModelFamily::knn}) {
    auto spec = default_spec(family, 31);
    if (family == ModelFamily::gbt) spec.numeric["n_estimators"] = 20;
    if (family == ModelFamily::random_forest) spec.numeric["n_trees"] = 15;
    const auto a = train_model(spec, rows);
    const auto b = train_model(spec, shuffled);
    for (const auto& q : queries) {
      const double sa = a.score(q);
      CHECK(sa >= 0.0);
      CHECK(sa <= 1.0);
      CHECK(sa == b.score(q));  // canonical internal order: exact match
    }
  }
}

TEST_CASE("standardizing families are invariant to affine feature rescaling") {
  const auto rows = blob_rows(80, 1.0, 131);
  Rng rng(132);
  std::vector<std::array<double, kNumFeatures>> queries;
  for (int i = 0; i < 20; ++i) queries.push_back(random_point(rng, 2.0));

  auto rescale = [](std::array<double, kNumFeatures> v) {
    v[2] = 37.5 * v[2] - 120.0;
    v[7] = 0.001 * v[7] + 3.0;
    return v;
  };
  std::vector<FeatureVector> scaled_rows = rows;
  for (auto& row : scaled_rows) row.v = rescale(row.v);

  for (auto family : {ModelFamily::glm, ModelFamily::lda, ModelFamily::knn}) {
    const auto spec = default_spec(family, 41);
    const auto base = train_model(spec, rows);
    const auto scaled = train_model(spec, scaled_rows);
    for (const auto& q : queries) {
      CHECK(scaled.score(rescale(q)) == doctest::Approx(base.score(q)).epsilon(1e-9));
    }
  }

  // svm_rbf: power-of-two rescaling is exact in floating point, so the
  // standardized matrix and hence the whole fit reproduce bit-for-bit.
  auto pow2_rescale = [](std::array<double, kNumFeatures> v) {
    v[2] *= 32.0;
    v[7] *= 0.0009765625;  // 2^-10
    return v;
  };
  std::vector<FeatureVector> pow2_rows = rows;
  for (auto& row : pow2_rows) row.v = pow2_rescale(row.v);
  const auto svm_spec = default_spec(ModelFamily::svm_rbf, 41);
  const auto svm_base = train_model(svm_spec, rows);
  const auto svm_pow2 = train_model(svm_spec, pow2_rows);
  for (const auto& q : queries) {
    CHECK(svm_pow2.score(pow2_rescale(q)) == svm_base.score(q));
  }
  // A shifted rescale perturbs the standardized values at rounding level,
  // which the dual solver (tolerance 1e-3) amplifies to that same scale:
  // scores agree to the optimizer's accuracy, not to 1e-9.
  const auto svm_affine = train_model(svm_spec, scaled_rows);
  for (const auto& q : queries) {
    CHECK(svm_affine.score(rescale(q)) ==
          doctest::Approx(svm_base.score(q)).epsilon(2e-3));
  }
}

}  // TEST_SUITE
