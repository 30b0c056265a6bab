#include "stresskit/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <set>
#include <utility>

#include "stresskit/dataset.hpp"
#include "stresskit/error.hpp"
#include "stresskit/rng.hpp"
#include "stresskit/stats.hpp"

namespace stresskit {
namespace {

void check_lengths(const std::vector<double>& scores,
                   const std::vector<int>& labels) {
  if (scores.size() != labels.size()) {
    throw eval_error("scores and labels have different lengths");
  }
}

std::vector<double> score_rows(const TrainedModel& model,
                               const std::vector<FeatureVector>& rows) {
  std::vector<double> scores;
  scores.reserve(rows.size());
  for (const auto& row : rows) scores.push_back(model.score(row));
  return scores;
}

std::vector<int> label_column(const std::vector<FeatureVector>& rows) {
  std::vector<int> labels;
  labels.reserve(rows.size());
  for (const auto& row : rows) labels.push_back(label_value(row.label));
  return labels;
}

}  // namespace

std::vector<RocPoint> roc_curve(const std::vector<double>& scores,
                                const std::vector<int>& labels) {
  check_lengths(scores, labels);
  std::int64_t pos = 0;
  std::int64_t neg = 0;
  for (int label : labels) (label != 0 ? pos : neg) += 1;
  if (pos == 0 || neg == 0) {
    throw eval_error(
        "roc_curve requires at least one positive and one negative label");
  }

  std::vector<std::pair<double, int>> order(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    order[i] = {scores[i], labels[i]};
  }
  std::sort(order.begin(), order.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });

  std::vector<RocPoint> roc;
  roc.push_back({0.0, 0.0, order.front().first + 1.0});
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    const double threshold = order[i].first;
    while (i < order.size() && order[i].first == threshold) {
      (order[i].second != 0 ? tp : fp) += 1;
      ++i;
    }
    roc.push_back({static_cast<double>(fp) / static_cast<double>(neg),
                   static_cast<double>(tp) / static_cast<double>(pos),
                   threshold});
  }
  return roc;
}

double auc(const std::vector<RocPoint>& roc) {
  if (roc.size() < 2) throw eval_error("auc requires at least two roc points");
  double area = 0.0;
  for (std::size_t i = 0; i + 1 < roc.size(); ++i) {
    area += (roc[i + 1].fpr - roc[i].fpr) * (roc[i + 1].tpr + roc[i].tpr) / 2.0;
  }
  return area;
}

ConfusionMatrix confusion_at(const std::vector<double>& scores,
                             const std::vector<int>& labels,
                             double threshold) {
  check_lengths(scores, labels);
  ConfusionMatrix m;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const bool predicted = scores[i] >= threshold;
    const bool actual = labels[i] != 0;
    if (actual) {
      (predicted ? m.tp : m.fn) += 1;
    } else {
      (predicted ? m.fp : m.tn) += 1;
    }
  }
  const std::int64_t pos = m.tp + m.fn;
  const std::int64_t neg = m.fp + m.tn;
  m.tpr = pos > 0 ? static_cast<double>(m.tp) / static_cast<double>(pos) : 0.0;
  m.fpr = neg > 0 ? static_cast<double>(m.fp) / static_cast<double>(neg) : 0.0;
  return m;
}

double accuracy_fraction(const std::vector<double>& scores,
                         const std::vector<int>& labels) {
  check_lengths(scores, labels);
  if (scores.empty()) throw eval_error("accuracy needs at least one row");
  std::size_t correct = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if ((scores[i] >= 0.5) == (labels[i] != 0)) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(scores.size());
}

const std::vector<Scenario>& standard_scenarios() {
  static const std::vector<Scenario> scenarios = {
      {"detect_all_stress", ScenarioKind::tpr_at_least, 1.0},
      {"balanced", ScenarioKind::tpr_at_least, 0.5},
      {"limit_false_positives", ScenarioKind::fpr_at_most, 0.1},
  };
  return scenarios;
}

RocPoint scenario_point(const std::vector<RocPoint>& roc,
                        const Scenario& scenario) {
  if (roc.empty()) throw eval_error("scenario_point requires a non-empty roc");
  if (scenario.kind == ScenarioKind::tpr_at_least) {
    // Thresholds descend along the sweep, so the first point meeting the
    // TPR floor carries the largest qualifying threshold.
    for (const auto& point : roc) {
      if (point.tpr >= scenario.bound) return point;
    }
    return roc.back();
  }
  // fpr_at_most: FPR never decreases along the sweep, so the last point
  // under the cap carries the smallest qualifying threshold.
  RocPoint best = roc.front();
  for (const auto& point : roc) {
    if (point.fpr <= scenario.bound) best = point;
  }
  return best;
}

EvalReport evaluate_model(const TrainedModel& model,
                          const std::vector<FeatureVector>& train_rows,
                          const std::vector<FeatureVector>& test_rows) {
  EvalReport report;
  const std::vector<double> train_scores = score_rows(model, train_rows);
  const std::vector<int> train_labels = label_column(train_rows);
  const std::vector<double> test_scores = score_rows(model, test_rows);
  const std::vector<int> test_labels = label_column(test_rows);

  report.train_accuracy_percent =
      100.0 * accuracy_fraction(train_scores, train_labels);
  report.test_accuracy_percent =
      100.0 * accuracy_fraction(test_scores, test_labels);
  report.roc = roc_curve(test_scores, test_labels);
  report.auc_value = auc(report.roc);
  for (const auto& scenario : standard_scenarios()) {
    const RocPoint point = scenario_point(report.roc, scenario);
    ScenarioResult result;
    result.scenario = scenario;
    result.threshold = point.threshold;
    result.matrix = confusion_at(test_scores, test_labels, point.threshold);
    report.scenarios.push_back(std::move(result));
  }
  return report;
}

CvResult kfold_cv(const ModelSpec& spec,
                  const std::vector<FeatureVector>& rows,
                  int k,
                  CvGrouping grouping,
                  std::uint64_t seed) {
  if (k < 2) throw eval_error("kfold_cv requires k >= 2 folds");
  const std::size_t folds = static_cast<std::size_t>(k);
  std::vector<std::size_t> fold_of(rows.size());

  if (grouping == CvGrouping::participant) {
    std::set<std::string> distinct;
    for (const auto& row : rows) distinct.insert(row.participant_id);
    if (distinct.size() < folds) {
      throw eval_error("kfold_cv with participant grouping needs at least " +
                       std::to_string(k) + " participants, got " +
                       std::to_string(distinct.size()));
    }
    std::vector<std::string> ids(distinct.begin(), distinct.end());
    Rng rng(derive_seed(seed, 0x6b666f6cULL));
    shuffle(ids, rng);
    std::map<std::string, std::size_t> fold_of_id;
    for (std::size_t i = 0; i < ids.size(); ++i) fold_of_id[ids[i]] = i % folds;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      fold_of[r] = fold_of_id.at(rows[r].participant_id);
    }
  } else {
    if (rows.size() < folds) {
      throw eval_error("kfold_cv with row grouping needs at least " +
                       std::to_string(k) + " rows, got " +
                       std::to_string(rows.size()));
    }
    std::vector<std::size_t> indices(rows.size());
    for (std::size_t i = 0; i < indices.size(); ++i) indices[i] = i;
    Rng rng(derive_seed(seed, 0x6b666f6cULL));
    shuffle(indices, rng);
    for (std::size_t p = 0; p < indices.size(); ++p) {
      fold_of[indices[p]] = p % folds;
    }
  }

  CvResult result;
  double total = 0.0;
  for (std::size_t f = 0; f < folds; ++f) {
    std::vector<FeatureVector> train;
    std::vector<FeatureVector> test;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      (fold_of[r] == f ? test : train).push_back(rows[r]);
    }
    const TrainedModel model = train_model(spec, train);
    const double accuracy =
        100.0 * accuracy_fraction(score_rows(model, test), label_column(test));
    result.fold_accuracy_percent.push_back(accuracy);
    total += accuracy;
  }
  result.mean_accuracy_percent = total / static_cast<double>(folds);
  return result;
}

FiveByTwoResult five_by_two_from_differences(
    const std::array<std::array<double, 2>, 5>& diffs) {
  FiveByTwoResult result;
  double sum_s2 = 0.0;
  for (std::size_t i = 0; i < 5; ++i) {
    const double d1 = diffs[i][0];
    const double d2 = diffs[i][1];
    const double mean = (d1 + d2) / 2.0;
    const double s2 = (d1 - mean) * (d1 - mean) + (d2 - mean) * (d2 - mean);
    result.replications[i] = {d1, d2, s2};
    sum_s2 += s2;
  }
  const double d11 = diffs[0][0];
  if (sum_s2 == 0.0) {
    result.degenerate = true;
    if (d11 == 0.0) {
      result.t = 0.0;
      result.p_value = 1.0;
    } else {
      result.t = d11 > 0.0 ? std::numeric_limits<double>::infinity()
                           : -std::numeric_limits<double>::infinity();
      result.p_value = 0.0;
    }
    return result;
  }
  result.t = d11 / std::sqrt(sum_s2 / 5.0);
  result.p_value = stats::student_t_two_sided_p(result.t, 5.0);
  return result;
}

FiveByTwoResult five_by_two_ttest(const ModelSpec& spec_a,
                                  const ModelSpec& spec_b,
                                  const std::vector<FeatureVector>& rows,
                                  std::uint64_t seed) {
  std::array<std::array<double, 2>, 5> diffs{};
  for (std::size_t rep = 0; rep < 5; ++rep) {
    const SplitDataset halves =
        participant_split(rows, 0.5, derive_seed(seed, 0x35783200ULL + rep));
    const std::vector<FeatureVector>& half1 = halves.train;
    const std::vector<FeatureVector>& half2 = halves.test;

    const TrainedModel a_on_2 = train_model(spec_a, half2);
    const TrainedModel b_on_2 = train_model(spec_b, half2);
    const std::vector<int> labels1 = label_column(half1);
    diffs[rep][0] = accuracy_fraction(score_rows(a_on_2, half1), labels1) -
                    accuracy_fraction(score_rows(b_on_2, half1), labels1);

    const TrainedModel a_on_1 = train_model(spec_a, half1);
    const TrainedModel b_on_1 = train_model(spec_b, half1);
    const std::vector<int> labels2 = label_column(half2);
    diffs[rep][1] = accuracy_fraction(score_rows(a_on_1, half2), labels2) -
                    accuracy_fraction(score_rows(b_on_1, half2), labels2);
  }
  return five_by_two_from_differences(diffs);
}

}  // namespace stresskit
