#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "stresskit/dataset.hpp"
#include "stresskit/evaluation.hpp"
#include "stresskit/explain.hpp"
#include "stresskit/features.hpp"
#include "stresskit/grid.hpp"
#include "stresskit/model.hpp"
#include "stresskit/synth.hpp"
#include "stresskit/types.hpp"
#include "stresskit/windowing.hpp"

namespace stresskit {

struct WindowingConfig {
  std::int64_t half_width_s = 30;
  std::int64_t nonstress_length_s = 60;
  double min_coverage = 0.8;
};

struct GridConfig {
  ModelFamily family = ModelFamily::gbt;
  GridObjective objective = GridObjective::validation_accuracy;
  Grid axes;
};

// Fully-resolved run configuration. parse_run_config validates the raw
// JSON against the shipped run_config schema (unknown keys rejected at
// every level), applies defaults, and checks semantic constraints, so a
// RunConfig in hand is always runnable.
struct RunConfig {
  std::uint64_t seed = 0;
  std::optional<std::filesystem::path> data_dir;  // exactly one of these
  std::optional<CohortConfig> synth;              // two is set
  WindowingConfig windowing;
  double train_fraction = 0.8;
  bool upsample_enabled = true;
  int nonstress_parts = 10;
  int stress_parts = 7;
  std::vector<ModelSpec> models;  // defaults to all six families
  std::size_t primary_index = 0;  // index into models
  int cv_folds = 10;
  std::vector<Scenario> scenarios;  // defaults to standard_scenarios()
  std::optional<GridConfig> grid;
  std::vector<std::string> dependence_features;  // empty = top 3 by rank
  std::optional<std::string> report_dir;
};

// Defaults: synthetic cohort, all six model families with gbt primary.
RunConfig default_run_config();

RunConfig parse_run_config(const nlohmann::json& raw);
RunConfig load_run_config(const std::filesystem::path& path);

// Cohort config from a standalone JSON document (same shape as the
// run_config "data.synth" block).
CohortConfig parse_cohort_config(const nlohmann::json& raw);

// Deterministic data stage: generate or load the cohort, extract
// event-anchored stress windows and non-stress tiles, apply the coverage
// filter, and featurize. Window order is per participant (stress first),
// participants sorted by id.
struct DataStage {
  std::vector<ParticipantRecord> cohort;
  std::vector<Window> windows;
  std::vector<FeatureVector> rows;
  WindowingReport windowing_report;
  std::size_t ingest_rejects = 0;  // rejected rows when loading from disk
};

DataStage run_data_stage(const RunConfig& config);

struct ModelOutcome {
  ModelSpec spec;
  TrainedModel model;
  EvalReport eval;
  CvResult cv;
};

struct RunArtifacts {
  RunConfig config;
  SplitDataset split;
  std::optional<UpsampleReport> upsample;
  std::vector<FeatureVector> train_rows;  // after upsampling (if enabled)
  std::vector<ModelOutcome> outcomes;     // one per configured model
  std::optional<ShapSummary> shap;        // primary model, test rows
  std::vector<std::string> dependence_features;  // resolved names
  std::optional<GridSearchResult> grid;
};

// Split, upsample, train every configured model, evaluate, cross-validate,
// attribute the primary tree model, and run the optional grid search.
RunArtifacts run_artifacts(const RunConfig& config, const DataStage& data);

// Convenience: data stage + artifacts.
RunArtifacts run_pipeline(const RunConfig& config);

// Writes the report bundle into dir (created if needed; must not already
// contain files). On any failure every file written so far is removed
// (and the directory too, when this call created it). Returns the bundle
// file names in manifest order.
std::vector<std::string> write_report_bundle(
    const RunArtifacts& artifacts, const std::filesystem::path& dir);

}  // namespace stresskit
