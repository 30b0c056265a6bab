#include "stresskit/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "stresskit/error.hpp"
#include "stresskit/ingest.hpp"
#include "stresskit/jsonschema.hpp"
#include "stresskit/kernels.hpp"
#include "stresskit/model_io.hpp"
#include "stresskit/report.hpp"
#include "stresskit/svg.hpp"
#include "stresskit/version.hpp"
#include "stresskit/windowing.hpp"

namespace stresskit {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using ojson = nlohmann::ordered_json;

std::uint64_t to_seed(const json& j, const std::string& what) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer()) {
    const auto v = j.get<long long>();
    if (v >= 0) return static_cast<std::uint64_t>(v);
  }
  if (j.is_number_float()) {
    const double d = j.get<double>();
    if (d >= 0 && d == std::trunc(d) && d <= 0x1.0p63) {
      return static_cast<std::uint64_t>(d);
    }
  }
  throw config_error(what + " must be a non-negative integer");
}

int to_int_at_least(const json& j, int minimum, const std::string& what) {
  long long v = 0;
  if (j.is_number_integer() || j.is_number_unsigned()) {
    v = j.get<long long>();
  } else if (j.is_number_float() && j.get<double>() == std::trunc(j.get<double>())) {
    v = static_cast<long long>(j.get<double>());
  } else {
    throw config_error(what + " must be an integer");
  }
  if (v < minimum) {
    throw config_error(what + " must be at least " + std::to_string(minimum));
  }
  return static_cast<int>(v);
}

void apply_cohort_overrides(CohortConfig& cohort, const json& raw) {
  if (raw.contains("n_participants")) {
    cohort.n_participants =
        to_int_at_least(raw.at("n_participants"), 1, "synth.n_participants");
  }
  if (raw.contains("days")) cohort.days = raw.at("days").get<double>();
  if (raw.contains("events_per_day")) {
    cohort.events_per_day = raw.at("events_per_day").get<double>();
  }
  if (raw.contains("baseline_hr_mean")) {
    cohort.baseline_hr_mean = raw.at("baseline_hr_mean").get<double>();
  }
  if (raw.contains("baseline_hr_sd")) {
    cohort.baseline_hr_sd = raw.at("baseline_hr_sd").get<double>();
  }
  if (raw.contains("delta_std_hr")) {
    cohort.delta_std_hr = raw.at("delta_std_hr").get<double>();
  }
  if (raw.contains("delta_min_hr")) {
    cohort.delta_min_hr = raw.at("delta_min_hr").get<double>();
  }
  if (raw.contains("acc_burst_amp")) {
    cohort.acc_burst_amp = raw.at("acc_burst_amp").get<double>();
  }
  if (raw.contains("seed")) cohort.seed = to_seed(raw.at("seed"), "synth.seed");
}

ModelSpec model_spec_from_json(const json& entry, std::uint64_t seed) {
  ModelFamily family = ModelFamily::gbt;
  if (entry.is_string()) {
    family = family_from_name(entry.get<std::string>());
    return default_spec(family, seed);
  }
  family = family_from_name(entry.at("family").get<std::string>());
  ModelSpec spec = default_spec(family, seed);
  if (entry.contains("hyperparameters")) {
    for (const auto& item : entry.at("hyperparameters").items()) {
      spec.numeric[item.key()] = item.value().get<double>();
    }
  }
  if (entry.contains("categorical")) {
    for (const auto& item : entry.at("categorical").items()) {
      spec.categorical[item.key()] = item.value().get<std::string>();
    }
  }
  validate_spec(spec);
  return spec;
}

void write_text_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw error("cannot open " + path.string() + " for writing");
  }
  out << content;
  if (!out) {
    throw error("failed writing " + path.string());
  }
}

std::string dump_json(const ojson& j) { return j.dump(2) + "\n"; }

}  // namespace

RunConfig default_run_config() {
  RunConfig config;
  config.synth = CohortConfig{};
  for (const auto family :
       {ModelFamily::gbt, ModelFamily::random_forest, ModelFamily::glm,
        ModelFamily::lda, ModelFamily::svm_rbf, ModelFamily::knn}) {
    config.models.push_back(default_spec(family, config.seed));
  }
  config.scenarios = standard_scenarios();
  return config;
}

CohortConfig parse_cohort_config(const nlohmann::json& raw) {
  const auto schema = shipped_schema("run_config")
                          .at("properties")
                          .at("data")
                          .at("properties")
                          .at("synth");
  const auto violations = schema_violations(schema, raw);
  if (!violations.empty()) {
    std::string msg = "cohort config:";
    for (const auto& v : violations) msg += "\n  " + v;
    throw config_error(msg);
  }
  CohortConfig cohort;
  apply_cohort_overrides(cohort, raw);
  validate(cohort);
  return cohort;
}

RunConfig parse_run_config(const nlohmann::json& raw) {
  const auto violations = schema_violations(shipped_schema("run_config"), raw);
  if (!violations.empty()) {
    std::string msg = "run config:";
    for (const auto& v : violations) msg += "\n  " + v;
    throw config_error(msg);
  }

  RunConfig config;
  if (raw.contains("seed")) config.seed = to_seed(raw.at("seed"), "seed");

  // Data source: a cohort directory or the synthetic generator (default).
  bool have_dir = false;
  bool have_synth = false;
  if (raw.contains("data")) {
    const auto& data = raw.at("data");
    have_dir = data.contains("dir");
    have_synth = data.contains("synth");
    if (have_dir && have_synth) {
      throw config_error("run config: data.dir and data.synth are exclusive");
    }
    if (have_dir) {
      config.data_dir = fs::path(data.at("dir").get<std::string>());
    }
    if (have_synth) {
      CohortConfig cohort;
      apply_cohort_overrides(cohort, data.at("synth"));
      validate(cohort);
      config.synth = cohort;
    }
  }
  if (!have_dir && !have_synth) config.synth = CohortConfig{};

  if (raw.contains("windowing")) {
    const auto& w = raw.at("windowing");
    if (w.contains("half_width_s")) {
      config.windowing.half_width_s =
          to_int_at_least(w.at("half_width_s"), 1, "windowing.half_width_s");
    }
    if (w.contains("nonstress_length_s")) {
      config.windowing.nonstress_length_s = to_int_at_least(
          w.at("nonstress_length_s"), 1, "windowing.nonstress_length_s");
    }
    if (w.contains("min_coverage")) {
      config.windowing.min_coverage = w.at("min_coverage").get<double>();
      if (!(config.windowing.min_coverage >= 0.0 &&
            config.windowing.min_coverage <= 1.0)) {
        throw config_error("windowing.min_coverage must be in [0, 1]");
      }
    }
  }

  if (raw.contains("split")) {
    const auto& s = raw.at("split");
    if (s.contains("train_fraction")) {
      config.train_fraction = s.at("train_fraction").get<double>();
      if (!(config.train_fraction > 0.0 && config.train_fraction < 1.0)) {
        throw config_error("split.train_fraction must be in (0, 1)");
      }
    }
  }

  if (raw.contains("upsample")) {
    const auto& u = raw.at("upsample");
    if (u.contains("enabled")) {
      config.upsample_enabled = u.at("enabled").get<bool>();
    }
    if (u.contains("nonstress_parts")) {
      config.nonstress_parts =
          to_int_at_least(u.at("nonstress_parts"), 1, "upsample.nonstress_parts");
    }
    if (u.contains("stress_parts")) {
      config.stress_parts =
          to_int_at_least(u.at("stress_parts"), 1, "upsample.stress_parts");
    }
  }

  if (raw.contains("models")) {
    if (raw.at("models").empty()) {
      throw config_error("run config: models must not be empty");
    }
    for (const auto& entry : raw.at("models")) {
      config.models.push_back(model_spec_from_json(entry, config.seed));
    }
  } else {
    for (const auto family :
         {ModelFamily::gbt, ModelFamily::random_forest, ModelFamily::glm,
          ModelFamily::lda, ModelFamily::svm_rbf, ModelFamily::knn}) {
      config.models.push_back(default_spec(family, config.seed));
    }
  }

  if (raw.contains("primary_model")) {
    const auto family =
        family_from_name(raw.at("primary_model").get<std::string>());
    bool found = false;
    for (std::size_t i = 0; i < config.models.size(); ++i) {
      if (config.models[i].family == family) {
        config.primary_index = i;
        found = true;
        break;
      }
    }
    if (!found) {
      throw config_error("run config: primary_model \"" +
                         raw.at("primary_model").get<std::string>() +
                         "\" is not among the configured models");
    }
  }

  if (raw.contains("cv_folds")) {
    config.cv_folds = to_int_at_least(raw.at("cv_folds"), 2, "cv_folds");
  }

  if (raw.contains("scenarios")) {
    for (const auto& s : raw.at("scenarios")) {
      Scenario scenario;
      scenario.name = s.at("name").get<std::string>();
      scenario.kind = s.at("kind").get<std::string>() == "tpr_at_least"
                          ? ScenarioKind::tpr_at_least
                          : ScenarioKind::fpr_at_most;
      scenario.bound = s.at("bound").get<double>();
      if (!(scenario.bound >= 0.0 && scenario.bound <= 1.0)) {
        throw config_error("scenario \"" + scenario.name +
                           "\": bound must be in [0, 1]");
      }
      config.scenarios.push_back(scenario);
    }
  } else {
    config.scenarios = standard_scenarios();
  }

  if (raw.contains("grid") && !raw.at("grid").is_null()) {
    const auto& g = raw.at("grid");
    GridConfig grid;
    grid.family = family_from_name(g.at("family").get<std::string>());
    if (g.contains("objective")) {
      grid.objective = objective_from_name(g.at("objective").get<std::string>());
    }
    const ModelSpec probe = default_spec(grid.family, 0);
    for (const auto& axis : g.at("axes").items()) {
      if (!probe.numeric.count(axis.key()) &&
          !probe.categorical.count(axis.key())) {
        throw config_error("grid axis \"" + axis.key() +
                           "\" is not a hyperparameter of " +
                           family_name(grid.family));
      }
      if (axis.value().empty()) {
        throw config_error("grid axis \"" + axis.key() + "\" is empty");
      }
      std::vector<GridValue> values;
      for (const auto& v : axis.value()) {
        values.push_back(v.is_string() ? GridValue::of(v.get<std::string>())
                                       : GridValue::of(v.get<double>()));
      }
      grid.axes[axis.key()] = std::move(values);
    }
    config.grid = grid;
  }

  if (raw.contains("dependence_features")) {
    const auto names = feature_name_vector();
    for (const auto& f : raw.at("dependence_features")) {
      const auto name = f.get<std::string>();
      if (std::find(names.begin(), names.end(), name) == names.end()) {
        throw config_error("unknown dependence feature \"" + name + "\"");
      }
      config.dependence_features.push_back(name);
    }
  }

  if (raw.contains("report_dir")) {
    config.report_dir = raw.at("report_dir").get<std::string>();
  }
  return config;
}

RunConfig load_run_config(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw config_error("cannot open run config " + path.string());
  }
  json raw;
  try {
    raw = json::parse(in);
  } catch (const json::exception& e) {
    throw config_error("run config " + path.string() + ": invalid JSON: " +
                       e.what());
  }
  return parse_run_config(raw);
}

DataStage run_data_stage(const RunConfig& config) {
  DataStage stage;
  if (config.synth) {
    stage.cohort = generate_cohort(*config.synth);
  } else {
    CohortLoadReport report;
    stage.cohort = load_cohort(*config.data_dir, report);
    stage.ingest_rejects = report.rejects.size();
    if (stage.cohort.empty()) {
      throw format_error("no participants found in " +
                         config.data_dir->string());
    }
  }
  for (const auto& rec : stage.cohort) {
    auto stress = extract_stress_windows(rec, stage.windowing_report,
                                         config.windowing.half_width_s);
    auto nonstress = extract_nonstress_windows(
        rec, stress, config.windowing.nonstress_length_s);
    std::vector<Window> all = std::move(stress);
    all.insert(all.end(), nonstress.begin(), nonstress.end());
    all = coverage_filter(std::move(all), stage.windowing_report,
                          config.windowing.min_coverage);
    stage.windows.insert(stage.windows.end(), all.begin(), all.end());
  }
  stage.rows = featurize_all(stage.windows);
  return stage;
}

RunArtifacts run_artifacts(const RunConfig& config, const DataStage& data) {
  RunArtifacts artifacts;
  artifacts.config = config;
  artifacts.split =
      participant_split(data.rows, config.train_fraction, config.seed);
  if (config.upsample_enabled) {
    UpsampleReport report;
    artifacts.train_rows =
        upsample_stress(artifacts.split.train, report, config.seed,
                        config.nonstress_parts, config.stress_parts);
    artifacts.upsample = report;
  } else {
    artifacts.train_rows = artifacts.split.train;
  }

  for (const auto& spec : config.models) {
    ModelOutcome outcome;
    outcome.spec = spec;
    outcome.model = train_model(spec, artifacts.train_rows);
    outcome.eval =
        evaluate_model(outcome.model, artifacts.train_rows, artifacts.split.test);
    outcome.cv = kfold_cv(spec, data.rows, config.cv_folds,
                          CvGrouping::participant, config.seed);
    artifacts.outcomes.push_back(std::move(outcome));
  }

  const auto& primary = artifacts.outcomes[config.primary_index];
  if (primary.model.is_tree_family()) {
    artifacts.shap = shap_summary(primary.model, artifacts.split.test);
    if (!config.dependence_features.empty()) {
      artifacts.dependence_features = config.dependence_features;
    } else {
      const std::size_t n =
          std::min<std::size_t>(3, artifacts.shap->entries.size());
      for (std::size_t i = 0; i < n; ++i) {
        artifacts.dependence_features.push_back(
            artifacts.shap->entries[i].feature);
      }
    }
  } else if (!config.dependence_features.empty()) {
    throw config_error(
        "dependence_features requires a tree-family primary model");
  }

  if (config.grid) {
    SplitDataset grid_data = artifacts.split;
    grid_data.train = artifacts.train_rows;
    artifacts.grid = grid_search(config.grid->family, config.grid->axes,
                                 grid_data, config.grid->objective,
                                 config.seed);
  }
  return artifacts;
}

RunArtifacts run_pipeline(const RunConfig& config) {
  const DataStage data = run_data_stage(config);
  return run_artifacts(config, data);
}

std::vector<std::string> write_report_bundle(const RunArtifacts& artifacts,
                                             const fs::path& dir) {
  bool created = false;
  if (!fs::exists(dir)) {
    fs::create_directories(dir);
    created = true;
  } else if (!fs::is_directory(dir)) {
    throw config_error("report path " + dir.string() + " is not a directory");
  } else if (!fs::is_empty(dir)) {
    throw config_error("report directory " + dir.string() + " is not empty");
  }

  std::vector<std::string> names;
  std::vector<fs::path> written;
  auto emit = [&](const std::string& name, const std::string& content) {
    const fs::path path = dir / name;
    write_text_file(path, content);
    written.push_back(path);
    names.push_back(name);
  };

  try {
    const auto& config = artifacts.config;
    const auto& primary = artifacts.outcomes[config.primary_index];

    emit("split.json",
         dump_json(split_json(
             artifacts.split, config.train_fraction,
             artifacts.upsample ? &*artifacts.upsample : nullptr,
             config.nonstress_parts, config.stress_parts)));

    std::vector<ModelMetricsRow> rows;
    for (const auto& outcome : artifacts.outcomes) {
      ModelMetricsRow row;
      row.family = outcome.spec.family;
      row.eval = outcome.eval;
      row.cv = outcome.cv;
      row.warnings = outcome.model.warnings;
      rows.push_back(std::move(row));
    }
    emit("metrics.json", dump_json(metrics_json(rows)));

    // Scenario table for the primary model at the configured operating
    // points (defaults to the standard three).
    {
      std::vector<double> scores;
      std::vector<int> labels;
      scores.reserve(artifacts.split.test.size());
      for (const auto& row : artifacts.split.test) {
        scores.push_back(primary.model.score(row));
        labels.push_back(label_value(row.label));
      }
      std::vector<ScenarioResult> results;
      for (const auto& scenario : config.scenarios) {
        ScenarioResult r;
        r.scenario = scenario;
        const RocPoint point = scenario_point(primary.eval.roc, scenario);
        r.threshold = point.threshold;
        r.matrix = confusion_at(scores, labels, point.threshold);
        results.push_back(std::move(r));
      }
      emit("scenarios.json",
           dump_json(scenarios_json(primary.spec.family, results)));
    }

    emit("roc.csv", roc_csv(primary.eval.roc));
    {
      char subtitle[64];
      std::snprintf(subtitle, sizeof(subtitle), "AUC %.4f",
                    primary.eval.auc_value);
      emit("roc.svg",
           roc_svg(primary.eval.roc,
                   std::string("ROC - ") + family_name(primary.spec.family),
                   subtitle));
    }

    if (artifacts.shap) {
      emit("shap_rows.csv", shap_rows_csv(*artifacts.shap));
      emit("shap_summary.csv", shap_summary_csv(*artifacts.shap));
      emit("shap_summary.svg", shap_beeswarm_svg(*artifacts.shap));
      for (const auto& feature : artifacts.dependence_features) {
        const auto points = shap_dependence(feature, artifacts.shap->rows);
        emit("shap_dependence_" + feature + ".csv", dependence_csv(points));
        emit("shap_dependence_" + feature + ".svg",
             shap_dependence_svg(feature, points));
      }
    }

    if (artifacts.grid) {
      emit("leaderboard.json",
           dump_json(leaderboard_json(config.grid->family, *artifacts.grid)));
    }

    ojson manifest;
    manifest["app"] = kAppName;
    manifest["version"] = kVersion;
    manifest["model_format_version"] = kModelFormatVersion;
    manifest["kernels_backend"] = kernels::backend_name();
    manifest["seed"] = config.seed;
    manifest["primary_family"] = family_name(primary.spec.family);
    std::vector<std::string> files = names;
    files.push_back("manifest.json");
    manifest["files"] = files;
    emit("manifest.json", dump_json(manifest));
  } catch (...) {
    for (const auto& path : written) {
      std::error_code ec;
      fs::remove(path, ec);
    }
    if (created) {
      std::error_code ec;
      fs::remove(dir, ec);
    }
    throw;
  }
  return names;
}

}  // namespace stresskit
