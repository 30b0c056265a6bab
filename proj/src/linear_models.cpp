#include <cmath>
#include <string>
#include <vector>

#include "stresskit/error.hpp"
#include "stresskit/linalg.hpp"
#include "stresskit/model.hpp"

namespace stresskit {

namespace {

// Standardized design matrix with a leading intercept column.
std::vector<double> augmented_design(const std::vector<FeatureVector>& rows,
                                     const Standardizer& standardizer) {
  const std::size_t d = kNumFeatures + 1;
  std::vector<double> design(rows.size() * d);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    design[i * d] = 1.0;
    const std::vector<double> xs = standardizer.apply(rows[i].v);
    for (std::size_t j = 0; j < kNumFeatures; ++j) design[i * d + 1 + j] = xs[j];
  }
  return design;
}

}  // namespace

TrainedModel train_glm(const std::vector<FeatureVector>& input, const ModelSpec& spec) {
  const std::vector<FeatureVector> rows = canonical_order(input);
  const std::size_t n = rows.size();
  if (n == 0) throw train_error("cannot train on zero rows");

  TrainedModel model;
  model.spec = spec;
  model.feature_names = feature_name_vector();
  model.standardizer.fit(rows);

  const double l2 = spec.num("l2");
  const int max_iter = static_cast<int>(spec.num("max_iter"));
  const double tol = spec.num("tol");

  const std::size_t d = kNumFeatures + 1;
  const std::vector<double> design = augmented_design(rows, model.standardizer);
  std::vector<double> beta(d, 0.0);
  std::vector<double> eta(n);
  bool converged = false;

  for (int iter = 0; iter < max_iter && !converged; ++iter) {
    // One iteratively-reweighted-least-squares step: solve the weighted
    // normal equations for the working response z = eta + (y - p) / w.
    std::vector<double> xtwx(d * d, 0.0);
    std::vector<double> xtwz(d, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double* xi = design.data() + i * d;
      double e = 0.0;
      for (std::size_t j = 0; j < d; ++j) e += beta[j] * xi[j];
      eta[i] = e;
      const double p = sigmoid(e);
      const double w = std::max(p * (1.0 - p), 1e-10);
      const double y = static_cast<double>(label_value(rows[i].label));
      const double wz = w * e + (y - p);
      for (std::size_t j = 0; j < d; ++j) {
        xtwz[j] += xi[j] * wz;
        const double wxj = w * xi[j];
        for (std::size_t k = 0; k <= j; ++k) xtwx[j * d + k] += wxj * xi[k];
      }
    }
    for (std::size_t j = 0; j < d; ++j) {
      for (std::size_t k = j + 1; k < d; ++k) xtwx[j * d + k] = xtwx[k * d + j];
    }
    for (std::size_t j = 1; j < d; ++j) xtwx[j * d + j] += l2;  // intercept unpenalized

    const std::vector<double> next = solve_spd(std::move(xtwx), xtwz);
    double delta = 0.0;
    for (std::size_t j = 0; j < d; ++j) delta = std::max(delta, std::abs(next[j] - beta[j]));
    beta = next;
    converged = delta < tol;
  }

  if (!converged) {
    model.warnings.push_back("glm did not converge in " + std::to_string(max_iter) +
                             " iterations; returning the last iterate");
  }
  model.intercept = beta[0];
  model.coef.assign(beta.begin() + 1, beta.end());
  return model;
}

TrainedModel train_lda(const std::vector<FeatureVector>& input, const ModelSpec& spec) {
  const std::vector<FeatureVector> rows = canonical_order(input);
  const std::size_t n = rows.size();
  if (n == 0) throw train_error("cannot train on zero rows");

  std::size_t n1 = 0;
  for (const FeatureVector& row : rows) n1 += label_value(row.label);
  const std::size_t n0 = n - n1;
  if (n0 == 0 || n1 == 0) throw train_error("lda requires both labels in the training data");

  TrainedModel model;
  model.spec = spec;
  model.feature_names = feature_name_vector();
  model.standardizer.fit(rows);

  const std::size_t d = kNumFeatures;
  std::vector<std::vector<double>> xs(n);
  std::vector<double> mean0(d, 0.0);
  std::vector<double> mean1(d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = model.standardizer.apply(rows[i].v);
    std::vector<double>& target = rows[i].label == Label::stress ? mean1 : mean0;
    for (std::size_t j = 0; j < d; ++j) target[j] += xs[i][j];
  }
  for (std::size_t j = 0; j < d; ++j) {
    mean0[j] /= static_cast<double>(n0);
    mean1[j] /= static_cast<double>(n1);
  }

  // Pooled within-class covariance with the usual n - 2 divisor.
  std::vector<double> cov(d * d, 0.0);
  std::vector<double> dev(d);
  for (std::size_t i = 0; i < n; ++i) {
    const std::vector<double>& mu = rows[i].label == Label::stress ? mean1 : mean0;
    for (std::size_t j = 0; j < d; ++j) dev[j] = xs[i][j] - mu[j];
    for (std::size_t j = 0; j < d; ++j) {
      for (std::size_t k = 0; k <= j; ++k) cov[j * d + k] += dev[j] * dev[k];
    }
  }
  const double divisor = n > 2 ? static_cast<double>(n - 2) : 1.0;
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t k = 0; k <= j; ++k) {
      cov[j * d + k] /= divisor;
      cov[k * d + j] = cov[j * d + k];
    }
  }
  const double shrinkage = spec.num("shrinkage");
  for (std::size_t j = 0; j < d; ++j) cov[j * d + j] += shrinkage;

  std::vector<double> diff(d);
  for (std::size_t j = 0; j < d; ++j) diff[j] = mean1[j] - mean0[j];
  model.coef = solve_spd(cov, diff);

  // Two-class posterior log-odds: w.x - w.(mu0+mu1)/2 + log(pi1/pi0).
  double center = 0.0;
  for (std::size_t j = 0; j < d; ++j) center += model.coef[j] * (mean0[j] + mean1[j]);
  model.intercept = -0.5 * center + std::log(static_cast<double>(n1) / static_cast<double>(n0));
  return model;
}

}  // namespace stresskit
