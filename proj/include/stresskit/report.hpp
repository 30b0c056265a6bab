#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "stresskit/dataset.hpp"
#include "stresskit/evaluation.hpp"
#include "stresskit/explain.hpp"
#include "stresskit/grid.hpp"
#include "stresskit/types.hpp"

namespace stresskit {

// Serializers for everything a report bundle contains. All output is a
// pure function of the inputs; JSON uses insertion-ordered keys and CSV
// numbers use shortest-round-trip formatting, so equal inputs give equal
// bytes. Each JSON document conforms to its shipped schema.

// split.json: the participant partition plus the applied upsampling
// (pass nullptr when upsampling was disabled).
nlohmann::ordered_json split_json(const SplitDataset& split,
                                  double target_train_fraction,
                                  const UpsampleReport* upsample,
                                  int nonstress_parts, int stress_parts);

struct ModelMetricsRow {
  ModelFamily family = ModelFamily::gbt;
  EvalReport eval;
  CvResult cv;
  std::vector<std::string> warnings;
};

// metrics.json: one row per trained family.
nlohmann::ordered_json metrics_json(const std::vector<ModelMetricsRow>& rows);

// scenarios.json: the primary model's operating points.
nlohmann::ordered_json scenarios_json(ModelFamily family,
                                      const std::vector<ScenarioResult>& scenarios);

// leaderboard.json for a grid search.
nlohmann::ordered_json leaderboard_json(ModelFamily family,
                                        const GridSearchResult& result);

// compare.json for a five-by-two paired t-test. Infinite t serializes
// as null (JSON has no infinity); the degenerate flag disambiguates.
nlohmann::ordered_json compare_json(ModelFamily family_a, ModelFamily family_b,
                                    std::uint64_t seed,
                                    const FiveByTwoResult& result);

// roc.csv: header fpr,tpr,threshold.
std::string roc_csv(const std::vector<RocPoint>& roc);

// Per-window attribution export: row_id,feature,feature_value,shap_value,base_value.
std::string shap_rows_csv(const ShapSummary& summary);

// Importance ranking: feature,mean_abs_shap,rank.
std::string shap_summary_csv(const ShapSummary& summary);

// Dependence pairs: feature_value,shap_value.
std::string dependence_csv(const std::vector<DependencePoint>& points);

// One window as a single JSONL line (no trailing newline).
std::string window_jsonl_line(const Window& window);

}  // namespace stresskit
