#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "stresskit/error.hpp"
#include "stresskit/kernels.hpp"
#include "stresskit/model.hpp"
#include "stresskit/rng.hpp"

namespace stresskit {

namespace {

struct PlattFit {
  double a = 0.0;
  double b = 0.0;
};

// Regularized maximum-likelihood sigmoid fit to decision values, following
// the Newton method with backtracking of Lin, Lu & Weng's formulation.
// Targets are the smoothed (n+1)/(n+2)-style values, which keep the fit
// finite even on separable data.
PlattFit fit_platt(const std::vector<double>& decision, const std::vector<int>& labels) {
  const std::size_t n = decision.size();
  double prior1 = 0.0;
  for (int y : labels) prior1 += y;
  const double prior0 = static_cast<double>(n) - prior1;

  const double hi = (prior1 + 1.0) / (prior1 + 2.0);
  const double lo = 1.0 / (prior0 + 2.0);
  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i) t[i] = labels[i] == 1 ? hi : lo;

  double a = 0.0;
  double b = std::log((prior0 + 1.0) / (prior1 + 1.0));

  auto objective = [&](double pa, double pb) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double z = pa * decision[i] + pb;
      if (z >= 0.0) {
        sum += t[i] * z + std::log1p(std::exp(-z));
      } else {
        sum += (t[i] - 1.0) * z + std::log1p(std::exp(z));
      }
    }
    return sum;
  };

  double fval = objective(a, b);
  for (int iter = 0; iter < 100; ++iter) {
    double h11 = 1e-12, h22 = 1e-12, h21 = 0.0;
    double g1 = 0.0, g2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double z = a * decision[i] + b;
      const double p = sigmoid(-z);  // P(y=1) under the 1/(1+exp(z)) form
      const double q = 1.0 - p;
      const double w = p * q;
      h11 += decision[i] * decision[i] * w;
      h22 += w;
      h21 += decision[i] * w;
      const double dd = t[i] - p;
      g1 += decision[i] * dd;
      g2 += dd;
    }
    if (std::max(std::abs(g1), std::abs(g2)) < 1e-10) break;

    const double det = h11 * h22 - h21 * h21;
    const double da = -(h22 * g1 - h21 * g2) / det;
    const double db = -(-h21 * g1 + h11 * g2) / det;
    const double gd = g1 * da + g2 * db;

    double step = 1.0;
    while (step >= 1e-10) {
      const double na = a + step * da;
      const double nb = b + step * db;
      const double nf = objective(na, nb);
      if (nf < fval + 1e-4 * step * gd) {
        a = na;
        b = nb;
        fval = nf;
        break;
      }
      step /= 2.0;
    }
    if (step < 1e-10) break;
  }
  return {a, b};
}

}  // namespace

TrainedModel train_svm_rbf(const std::vector<FeatureVector>& input, const ModelSpec& spec) {
  const std::vector<FeatureVector> rows = canonical_order(input);
  const std::size_t n = rows.size();
  if (n == 0) throw train_error("cannot train on zero rows");
  if (n < 2) throw train_error("svm_rbf needs at least two rows");

  TrainedModel model;
  model.spec = spec;
  model.feature_names = feature_name_vector();
  model.standardizer.fit(rows);

  const std::size_t d = kNumFeatures;
  std::vector<std::vector<double>> xs(n);
  std::vector<double> y(n);
  std::vector<int> labels01(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = model.standardizer.apply(rows[i].v);
    labels01[i] = label_value(rows[i].label);
    y[i] = labels01[i] == 1 ? 1.0 : -1.0;
  }

  const double c_bound = spec.num("C");
  const double tol = spec.num("tol");
  const int max_passes = static_cast<int>(spec.num("max_passes"));

  double gamma = spec.num("gamma");
  if (gamma <= 0.0) {
    // Auto rule: 1 / (d * var(X)) with var taken over all matrix entries.
    double sum = 0.0, sumsq = 0.0;
    for (const auto& row : xs) {
      for (double v : row) {
        sum += v;
        sumsq += v * v;
      }
    }
    const double count = static_cast<double>(n * d);
    const double mean = sum / count;
    const double var = sumsq / count - mean * mean;
    gamma = var > 0.0 ? 1.0 / (static_cast<double>(d) * var) : 1.0 / static_cast<double>(d);
  }

  auto kernel = [&](std::size_t i, std::size_t j) {
    return std::exp(-gamma * kernels::squared_distance(xs[i].data(), xs[j].data(), d));
  };

  std::vector<double> alpha(n, 0.0);
  double bias = 0.0;
  auto decision = [&](std::size_t q) {
    double f = bias;
    for (std::size_t i = 0; i < n; ++i) {
      if (alpha[i] > 0.0) f += alpha[i] * y[i] * kernel(i, q);
    }
    return f;
  };

  // Sequential minimal optimization over random partner pairs; stops after
  // max_passes consecutive sweeps without an update.
  Rng rng(derive_seed(spec.seed, 0x73766d00ULL));
  const int hard_cap = std::max(200, 20 * max_passes);
  int quiet_passes = 0;
  int sweeps = 0;
  bool last_sweep_changed = false;
  while (quiet_passes < max_passes && sweeps < hard_cap) {
    int changed = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double ei = decision(i) - y[i];
      const double r = y[i] * ei;
      if (!((r < -tol && alpha[i] < c_bound) || (r > tol && alpha[i] > 0.0))) continue;

      std::size_t j = static_cast<std::size_t>(rng.next_below(n - 1));
      if (j >= i) ++j;
      const double ej = decision(j) - y[j];

      const double ai_old = alpha[i];
      const double aj_old = alpha[j];
      double low, high;
      if (y[i] != y[j]) {
        low = std::max(0.0, aj_old - ai_old);
        high = std::min(c_bound, c_bound + aj_old - ai_old);
      } else {
        low = std::max(0.0, ai_old + aj_old - c_bound);
        high = std::min(c_bound, ai_old + aj_old);
      }
      if (low == high) continue;

      const double kij = kernel(i, j);
      const double eta = 2.0 * kij - kernel(i, i) - kernel(j, j);
      if (eta >= 0.0) continue;

      double aj = aj_old - y[j] * (ei - ej) / eta;
      aj = std::clamp(aj, low, high);
      if (std::abs(aj - aj_old) < 1e-5) continue;
      const double ai = ai_old + y[i] * y[j] * (aj_old - aj);

      alpha[i] = ai;
      alpha[j] = aj;
      const double b1 = bias - ei - y[i] * (ai - ai_old) * kernel(i, i) -
                        y[j] * (aj - aj_old) * kij;
      const double b2 = bias - ej - y[i] * (ai - ai_old) * kij -
                        y[j] * (aj - aj_old) * kernel(j, j);
      if (ai > 0.0 && ai < c_bound) {
        bias = b1;
      } else if (aj > 0.0 && aj < c_bound) {
        bias = b2;
      } else {
        bias = (b1 + b2) / 2.0;
      }
      ++changed;
    }
    last_sweep_changed = changed > 0;
    quiet_passes = changed == 0 ? quiet_passes + 1 : 0;
    ++sweeps;
  }
  if (quiet_passes < max_passes && last_sweep_changed) {
    model.warnings.push_back("svm_rbf optimizer hit the sweep cap before the "
                             "multipliers settled; returning current multipliers");
  }

  // Decision values on the training rows feed the probability calibration.
  std::vector<double> train_decision(n);
  for (std::size_t i = 0; i < n; ++i) train_decision[i] = decision(i);

  for (std::size_t i = 0; i < n; ++i) {
    if (alpha[i] > 1e-12) {
      model.sv.push_back(xs[i]);
      model.sv_coef.push_back(alpha[i] * y[i]);
    }
  }
  model.svm_bias = bias;
  model.svm_gamma = gamma;

  const PlattFit platt = fit_platt(train_decision, labels01);
  model.platt_a = platt.a;
  model.platt_b = platt.b;
  return model;
}

TrainedModel train_knn(const std::vector<FeatureVector>& input, const ModelSpec& spec) {
  const std::vector<FeatureVector> rows = canonical_order(input);
  const std::size_t n = rows.size();
  if (n == 0) throw train_error("cannot train on zero rows");
  const std::size_t k = static_cast<std::size_t>(spec.num("k"));
  if (k > n) {
    throw train_error("knn k=" + std::to_string(k) + " exceeds the training row count " +
                      std::to_string(n));
  }

  TrainedModel model;
  model.spec = spec;
  model.feature_names = feature_name_vector();
  model.standardizer.fit(rows);
  model.knn_points.resize(n);
  model.knn_labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    model.knn_points[i] = model.standardizer.apply(rows[i].v);
    model.knn_labels[i] = label_value(rows[i].label);
  }
  return model;
}

}  // namespace stresskit
