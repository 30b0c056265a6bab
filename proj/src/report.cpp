#include "stresskit/report.hpp"

#include <cmath>
#include <sstream>

#include "stresskit/ingest.hpp"

namespace stresskit {
namespace {

using ojson = nlohmann::ordered_json;

ojson confusion_fields(const Scenario& scenario, double threshold,
                       const ConfusionMatrix& m) {
  ojson j;
  j["name"] = scenario.name;
  j["kind"] = scenario.kind == ScenarioKind::tpr_at_least ? "tpr_at_least"
                                                          : "fpr_at_most";
  j["bound"] = scenario.bound;
  j["threshold"] = threshold;
  j["tp"] = m.tp;
  j["fn"] = m.fn;
  j["fp"] = m.fp;
  j["tn"] = m.tn;
  j["tpr"] = m.tpr;
  j["fpr"] = m.fpr;
  return j;
}

ojson grid_values_json(const std::map<std::string, GridValue>& values) {
  ojson j = ojson::object();
  for (const auto& [name, value] : values) {
    if (value.is_number) {
      j[name] = value.number;
    } else {
      j[name] = value.text;
    }
  }
  return j;
}

}  // namespace

ojson split_json(const SplitDataset& split, double target_train_fraction,
                 const UpsampleReport* upsample, int nonstress_parts,
                 int stress_parts) {
  ojson j;
  j["seed"] = split.seed;
  j["target_train_fraction"] = target_train_fraction;
  j["achieved_train_fraction"] = split.achieved_fraction;
  j["train_participants"] = std::vector<std::string>(
      split.train_participants.begin(), split.train_participants.end());
  j["test_participants"] = std::vector<std::string>(
      split.test_participants.begin(), split.test_participants.end());
  const auto train_counts = count_labels(split.train);
  const auto test_counts = count_labels(split.test);
  j["train_rows"] = split.train.size();
  j["train_stress_rows"] = train_counts.stress;
  j["test_rows"] = split.test.size();
  j["test_stress_rows"] = test_counts.stress;
  if (upsample) {
    ojson u;
    u["nonstress_parts"] = nonstress_parts;
    u["stress_parts"] = stress_parts;
    u["stress_before"] = upsample->stress_before;
    u["stress_after"] = upsample->stress_after;
    u["duplicates_added"] = upsample->duplicates_added;
    u["noop_target_below_current"] = upsample->noop_target_below_current;
    j["upsample"] = u;
  } else {
    j["upsample"] = nullptr;
  }
  return j;
}

ojson metrics_json(const std::vector<ModelMetricsRow>& rows) {
  ojson models = ojson::array();
  for (const auto& row : rows) {
    ojson m;
    m["family"] = family_name(row.family);
    m["train_accuracy_percent"] = row.eval.train_accuracy_percent;
    m["test_accuracy_percent"] = row.eval.test_accuracy_percent;
    m["cv_mean_accuracy_percent"] = row.cv.mean_accuracy_percent;
    m["cv_fold_accuracy_percent"] = row.cv.fold_accuracy_percent;
    m["auc"] = row.eval.auc_value;
    m["warnings"] = row.warnings;
    models.push_back(m);
  }
  ojson j;
  j["models"] = models;
  return j;
}

ojson scenarios_json(ModelFamily family,
                     const std::vector<ScenarioResult>& scenarios) {
  ojson list = ojson::array();
  for (const auto& s : scenarios) {
    list.push_back(confusion_fields(s.scenario, s.threshold, s.matrix));
  }
  ojson j;
  j["family"] = family_name(family);
  j["scenarios"] = list;
  return j;
}

ojson leaderboard_json(ModelFamily family, const GridSearchResult& result) {
  ojson entries = ojson::array();
  for (const auto& entry : result.leaderboard) {
    ojson e;
    e["values"] = grid_values_json(entry.values);
    e["accuracy_percent"] = entry.accuracy_percent;
    e["failed"] = entry.failed;
    if (entry.failed) e["failure_reason"] = entry.failure_reason;
    if (!entry.warnings.empty()) e["warnings"] = entry.warnings;
    entries.push_back(e);
  }
  ojson j;
  j["family"] = family_name(family);
  j["objective"] = objective_name(result.objective);
  j["combinations"] = result.combinations;
  if (!result.warnings.empty()) j["warnings"] = result.warnings;
  // The winning combination's values are the first non-failed entry's.
  ojson best = ojson::object();
  for (const auto& entry : result.leaderboard) {
    if (!entry.failed) {
      best = grid_values_json(entry.values);
      break;
    }
  }
  j["best"] = best;
  j["leaderboard"] = entries;
  return j;
}

ojson compare_json(ModelFamily family_a, ModelFamily family_b,
                   std::uint64_t seed, const FiveByTwoResult& result) {
  ojson j;
  j["family_a"] = family_name(family_a);
  j["family_b"] = family_name(family_b);
  j["seed"] = seed;
  if (std::isfinite(result.t)) {
    j["t"] = result.t;
  } else {
    j["t"] = nullptr;
  }
  j["p_value"] = result.p_value;
  j["degenerate"] = result.degenerate;
  ojson reps = ojson::array();
  for (const auto& r : result.replications) {
    ojson rep;
    rep["diff_fold1"] = r.diff_fold1;
    rep["diff_fold2"] = r.diff_fold2;
    rep["variance"] = r.variance;
    reps.push_back(rep);
  }
  j["replications"] = reps;
  return j;
}

std::string roc_csv(const std::vector<RocPoint>& roc) {
  std::ostringstream out;
  out << "fpr,tpr,threshold\n";
  for (const auto& p : roc) {
    out << format_double(p.fpr) << "," << format_double(p.tpr) << ","
        << format_double(p.threshold) << "\n";
  }
  return out.str();
}

std::string shap_rows_csv(const ShapSummary& summary) {
  const auto names = feature_name_vector();
  std::ostringstream out;
  out << "row_id,feature,feature_value,shap_value,base_value\n";
  for (std::size_t i = 0; i < summary.rows.size(); ++i) {
    const auto& row = summary.rows[i];
    for (std::size_t f = 0; f < kNumFeatures; ++f) {
      out << i << "," << names[f] << "," << format_double(row.x[f]) << ","
          << format_double(row.shap[f]) << ","
          << format_double(row.base_value) << "\n";
    }
  }
  return out.str();
}

std::string shap_summary_csv(const ShapSummary& summary) {
  std::ostringstream out;
  out << "feature,mean_abs_shap,rank\n";
  for (const auto& e : summary.entries) {
    out << e.feature << "," << format_double(e.mean_abs_shap) << "," << e.rank
        << "\n";
  }
  return out.str();
}

std::string dependence_csv(const std::vector<DependencePoint>& points) {
  std::ostringstream out;
  out << "feature_value,shap_value\n";
  for (const auto& p : points) {
    out << format_double(p.feature_value) << "," << format_double(p.shap_value)
        << "\n";
  }
  return out.str();
}

std::string window_jsonl_line(const Window& window) {
  ojson j;
  j["participant_id"] = window.participant_id;
  j["label"] = window.label == Label::stress ? "stress" : "nonstress";
  j["start_t"] = window.start_t;
  j["end_t"] = window.end_t;
  ojson samples = ojson::array();
  for (const auto& s : window.samples) {
    ojson sample;
    sample["t"] = s.t;
    sample["hr"] = s.hr;
    sample["ax"] = s.ax;
    sample["ay"] = s.ay;
    sample["az"] = s.az;
    samples.push_back(sample);
  }
  j["samples"] = samples;
  return j.dump();
}

}  // namespace stresskit
