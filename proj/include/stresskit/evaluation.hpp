#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "stresskit/model.hpp"
#include "stresskit/types.hpp"

namespace stresskit {

// One operating point of an ROC curve. `threshold` is the smallest score
// classified as positive at this point.
struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
  double threshold = 0.0;

  bool operator==(const RocPoint&) const = default;
};

// Sweeps the distinct score values in descending order, preceded by a
// sentinel threshold above the maximum score, so the curve always starts
// at (0,0) and ends at (1,1). Labels are 0 (negative) / nonzero
// (positive). Throws eval_error when only one class is present or the
// input lengths differ.
std::vector<RocPoint> roc_curve(const std::vector<double>& scores,
                                const std::vector<int>& labels);

// Trapezoidal area under the curve. Equals the probability that a random
// positive outscores a random negative, with ties credited one half.
double auc(const std::vector<RocPoint>& roc);

struct ConfusionMatrix {
  std::int64_t tp = 0;
  std::int64_t fn = 0;
  std::int64_t fp = 0;
  std::int64_t tn = 0;
  double tpr = 0.0;
  double fpr = 0.0;
};

// Counts at a fixed threshold; a row is predicted positive when its
// score is >= threshold.
ConfusionMatrix confusion_at(const std::vector<double>& scores,
                             const std::vector<int>& labels,
                             double threshold);

// Fraction of rows classified correctly at the conventional 0.5 cut.
// Throws eval_error on empty or mismatched input.
double accuracy_fraction(const std::vector<double>& scores,
                         const std::vector<int>& labels);

enum class ScenarioKind { tpr_at_least, fpr_at_most };

struct Scenario {
  std::string name;
  ScenarioKind kind = ScenarioKind::tpr_at_least;
  double bound = 1.0;
};

// The three operating scenarios reported by `eval`: catch every stress
// window, balanced detection, and a strict false-positive budget.
const std::vector<Scenario>& standard_scenarios();

// tpr_at_least: the point with the largest threshold whose TPR >= bound
// (minimizes FPR subject to the TPR floor; always satisfiable because the
// final point has TPR = 1). fpr_at_most: the point with the smallest
// threshold whose FPR <= bound (maximizes TPR subject to the cap; always
// satisfiable because the sentinel point has FPR = 0).
RocPoint scenario_point(const std::vector<RocPoint>& roc,
                        const Scenario& scenario);

struct ScenarioResult {
  Scenario scenario;
  double threshold = 0.0;
  ConfusionMatrix matrix;
};

// Accuracy, ROC, AUC, and the standard scenario confusion matrices for
// one trained model. ROC, AUC, and scenarios are computed on the test
// rows; accuracies are percentages.
struct EvalReport {
  double train_accuracy_percent = 0.0;
  double test_accuracy_percent = 0.0;
  double auc_value = 0.0;
  std::vector<RocPoint> roc;
  std::vector<ScenarioResult> scenarios;
};

EvalReport evaluate_model(const TrainedModel& model,
                          const std::vector<FeatureVector>& train_rows,
                          const std::vector<FeatureVector>& test_rows);

enum class CvGrouping { participant, row };

struct CvResult {
  double mean_accuracy_percent = 0.0;
  std::vector<double> fold_accuracy_percent;
};

// k-fold cross-validation. With participant grouping (the default) the
// folds partition participants, so no person contributes rows to both a
// training set and its held-out fold; with row grouping the folds
// partition rows directly. Fold assignment is a seeded shuffle dealt
// round-robin. Throws eval_error when there are fewer groups than folds
// or k < 2.
CvResult kfold_cv(const ModelSpec& spec,
                  const std::vector<FeatureVector>& rows,
                  int k = 10,
                  CvGrouping grouping = CvGrouping::participant,
                  std::uint64_t seed = 0);

struct FiveByTwoReplication {
  // Accuracy difference (model A minus model B) with each half held out
  // in turn: diff_fold1 tests on the first half after training on the
  // second; diff_fold2 the reverse.
  double diff_fold1 = 0.0;
  double diff_fold2 = 0.0;
  double variance = 0.0;
};

struct FiveByTwoResult {
  double t = 0.0;
  double p_value = 1.0;
  bool degenerate = false;  // every replication variance is zero
  std::array<FiveByTwoReplication, 5> replications{};
};

// The paired t statistic from the raw per-fold accuracy differences of
// five 2-fold replications: with per-replication variance
// s_i^2 = (d_i1 - m_i)^2 + (d_i2 - m_i)^2 around the fold mean m_i,
// t = d_11 / sqrt((1/5) * sum s_i^2), two-sided p from Student's t with
// 5 degrees of freedom. When every s_i^2 is zero the result is flagged
// degenerate: t = 0, p = 1 if d_11 is zero, else t = +/-infinity, p = 0.
FiveByTwoResult five_by_two_from_differences(
    const std::array<std::array<double, 2>, 5>& diffs);

// Five seeded replications of 2-fold participant-grouped cross-validation
// comparing two model specs on the same rows. Each replication splits the
// participants in half, trains both models on each half, and scores them
// on the opposite half.
FiveByTwoResult five_by_two_ttest(const ModelSpec& spec_a,
                                  const ModelSpec& spec_b,
                                  const std::vector<FeatureVector>& rows,
                                  std::uint64_t seed);

}  // namespace stresskit
