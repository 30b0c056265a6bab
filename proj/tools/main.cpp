// stresskit: stress-window detection from wearable heart-rate and
// accelerometer streams. Subcommands cover cohort synthesis, the full
// train/evaluate/report pipeline, single-model training, evaluation of a
// saved model, SHAP attribution, and a paired model comparison.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <system_error>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "stresskit/dataset.hpp"
#include "stresskit/error.hpp"
#include "stresskit/evaluation.hpp"
#include "stresskit/explain.hpp"
#include "stresskit/ingest.hpp"
#include "stresskit/model.hpp"
#include "stresskit/model_io.hpp"
#include "stresskit/pipeline.hpp"
#include "stresskit/report.hpp"
#include "stresskit/svg.hpp"
#include "stresskit/synth.hpp"
#include "stresskit/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using ojson = nlohmann::ordered_json;

namespace {

using namespace stresskit;

void print_error(const std::string& type, const std::string& message) {
  ojson err;
  err["error"]["type"] = type;
  err["error"]["message"] = message;
  std::fputs((err.dump() + "\n").c_str(), stderr);
}

// Writes `content` to `path`, or to stdout when path is empty.
void emit_document(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::fputs(content.c_str(), stdout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw error("cannot open " + path + " for writing");
  out << content;
  if (!out) throw error("failed writing " + path);
}

RunConfig config_or_default(const std::string& path) {
  if (path.empty()) return default_run_config();
  return load_run_config(path);
}

struct TrainingSetup {
  SplitDataset split;
  std::optional<UpsampleReport> upsample;
  std::vector<FeatureVector> train_rows;
};

TrainingSetup prepare_training(const RunConfig& config, const DataStage& data) {
  TrainingSetup setup;
  setup.split = participant_split(data.rows, config.train_fraction, config.seed);
  if (config.upsample_enabled) {
    UpsampleReport report;
    setup.train_rows =
        upsample_stress(setup.split.train, report, config.seed,
                        config.nonstress_parts, config.stress_parts);
    setup.upsample = report;
  } else {
    setup.train_rows = setup.split.train;
  }
  return setup;
}

std::vector<ScenarioResult> scenario_table(const RunConfig& config,
                                           const TrainedModel& model,
                                           const EvalReport& eval,
                                           const std::vector<FeatureVector>& test) {
  std::vector<double> scores;
  std::vector<int> labels;
  scores.reserve(test.size());
  for (const auto& row : test) {
    scores.push_back(model.score(row));
    labels.push_back(label_value(row.label));
  }
  std::vector<ScenarioResult> results;
  for (const auto& scenario : config.scenarios) {
    ScenarioResult r;
    r.scenario = scenario;
    r.threshold = scenario_point(eval.roc, scenario).threshold;
    r.matrix = confusion_at(scores, labels, r.threshold);
    results.push_back(std::move(r));
  }
  return results;
}

// --- synth ---------------------------------------------------------------

struct SynthArgs {
  std::string out;
  std::string config_path;
  std::optional<int> participants;
  std::optional<double> days;
  std::optional<double> events_per_day;
  std::optional<double> baseline_hr_mean;
  std::optional<double> baseline_hr_sd;
  std::optional<double> delta_std_hr;
  std::optional<double> delta_min_hr;
  std::optional<double> acc_burst_amp;
  std::optional<std::uint64_t> seed;
};

int cmd_synth(const SynthArgs& args) {
  CohortConfig cohort;
  if (!args.config_path.empty()) {
    std::ifstream in(args.config_path, std::ios::binary);
    if (!in) {
      throw config_error("cannot open cohort config " + args.config_path);
    }
    json raw;
    try {
      raw = json::parse(in);
    } catch (const json::exception& e) {
      throw config_error("cohort config " + args.config_path +
                         ": invalid JSON: " + e.what());
    }
    cohort = parse_cohort_config(raw);
  }
  if (args.participants) cohort.n_participants = *args.participants;
  if (args.days) cohort.days = *args.days;
  if (args.events_per_day) cohort.events_per_day = *args.events_per_day;
  if (args.baseline_hr_mean) cohort.baseline_hr_mean = *args.baseline_hr_mean;
  if (args.baseline_hr_sd) cohort.baseline_hr_sd = *args.baseline_hr_sd;
  if (args.delta_std_hr) cohort.delta_std_hr = *args.delta_std_hr;
  if (args.delta_min_hr) cohort.delta_min_hr = *args.delta_min_hr;
  if (args.acc_burst_amp) cohort.acc_burst_amp = *args.acc_burst_amp;
  if (args.seed) cohort.seed = *args.seed;
  validate(cohort);

  const auto cohort_records = generate_cohort(cohort);
  fs::create_directories(args.out);
  std::size_t samples = 0;
  std::size_t events = 0;
  for (const auto& rec : cohort_records) {
    write_participant(rec, args.out);
    samples += rec.samples.size();
    events += rec.events.size();
  }
  std::printf("wrote %zu participants (%zu samples, %zu events) to %s\n",
              cohort_records.size(), samples, events, args.out.c_str());
  return 0;
}

// --- run -------------------------------------------------------------------

struct RunArgs {
  std::string config_path;
  bool synth_default = false;
  std::string report_dir;  // flag or STRESSKIT_REPORT_DIR
  std::string dump_windows;
};

int cmd_run(const RunArgs& args) {
  const bool have_config = !args.config_path.empty();
  if (have_config == args.synth_default) {
    throw config_error(
        "run: pass exactly one of --config FILE or --synth-default");
  }
  const RunConfig config = args.synth_default
                               ? default_run_config()
                               : load_run_config(args.config_path);

  std::string dir = args.report_dir;
  if (dir.empty() && config.report_dir) dir = *config.report_dir;
  if (dir.empty()) dir = "report";

  const DataStage data = run_data_stage(config);
  if (!args.dump_windows.empty()) {
    std::ofstream out(args.dump_windows, std::ios::binary);
    if (!out) {
      throw error("cannot open " + args.dump_windows + " for writing");
    }
    for (const auto& window : data.windows) {
      out << window_jsonl_line(window) << '\n';
    }
    if (!out) throw error("failed writing " + args.dump_windows);
  }

  const RunArtifacts artifacts = run_artifacts(config, data);
  const auto files = write_report_bundle(artifacts, dir);

  const auto& primary = artifacts.outcomes[config.primary_index];
  std::printf("report bundle: %zu files in %s\n", files.size(), dir.c_str());
  std::printf("primary %s: auc %.4f, test accuracy %.2f%%\n",
              family_name(primary.spec.family), primary.eval.auc_value,
              primary.eval.test_accuracy_percent);
  return 0;
}

// --- train -----------------------------------------------------------------

struct TrainArgs {
  std::string config_path;
  std::string out;
  std::string family;
};

std::size_t resolve_model_index(const RunConfig& config,
                                const std::string& family) {
  if (family.empty()) return config.primary_index;
  const ModelFamily wanted = family_from_name(family);
  for (std::size_t i = 0; i < config.models.size(); ++i) {
    if (config.models[i].family == wanted) return i;
  }
  throw config_error("family \"" + family +
                     "\" is not among the configured models");
}

int cmd_train(const TrainArgs& args) {
  const RunConfig config = config_or_default(args.config_path);
  const std::size_t index = resolve_model_index(config, args.family);
  const DataStage data = run_data_stage(config);
  const TrainingSetup setup = prepare_training(config, data);
  const TrainedModel model =
      train_model(config.models[index], setup.train_rows);
  save_model(model, args.out);
  std::printf("trained %s on %zu rows (%zu stress), saved to %s\n",
              family_name(model.spec.family), setup.train_rows.size(),
              count_labels(setup.train_rows).stress, args.out.c_str());
  return 0;
}

// --- eval ------------------------------------------------------------------

struct EvalArgs {
  std::string config_path;
  std::string model_path;
  std::string out;
  std::string scenarios_out;
};

int cmd_eval(const EvalArgs& args) {
  const RunConfig config = config_or_default(args.config_path);
  const TrainedModel model = load_model(args.model_path);
  const DataStage data = run_data_stage(config);
  const TrainingSetup setup = prepare_training(config, data);

  const EvalReport eval =
      evaluate_model(model, setup.train_rows, setup.split.test);
  const CvResult cv = kfold_cv(model.spec, data.rows, config.cv_folds,
                               CvGrouping::participant, config.seed);

  ModelMetricsRow row;
  row.family = model.spec.family;
  row.eval = eval;
  row.cv = cv;
  row.warnings = model.warnings;
  emit_document(args.out, metrics_json({row}).dump(2) + "\n");

  if (!args.scenarios_out.empty()) {
    const auto results = scenario_table(config, model, eval, setup.split.test);
    emit_document(args.scenarios_out,
                  scenarios_json(model.spec.family, results).dump(2) + "\n");
  }
  return 0;
}

// --- explain ----------------------------------------------------------------

struct ExplainArgs {
  std::string config_path;
  std::string model_path;
  std::string out_dir;
  std::vector<std::string> features;
};

int cmd_explain(const ExplainArgs& args) {
  const RunConfig config = config_or_default(args.config_path);
  const TrainedModel model = load_model(args.model_path);
  if (!model.is_tree_family()) {
    throw explain_error(
        "shap attribution requires a tree-family model (gbt or "
        "random_forest); got " +
        std::string(family_name(model.spec.family)));
  }
  const auto names = feature_name_vector();
  for (const auto& feature : args.features) {
    if (std::find(names.begin(), names.end(), feature) == names.end()) {
      throw config_error("unknown feature \"" + feature + "\"");
    }
  }

  const DataStage data = run_data_stage(config);
  const TrainingSetup setup = prepare_training(config, data);
  const ShapSummary summary = shap_summary(model, setup.split.test);

  std::vector<std::string> features = args.features;
  if (features.empty()) {
    const std::size_t n = std::min<std::size_t>(3, summary.entries.size());
    for (std::size_t i = 0; i < n; ++i) {
      features.push_back(summary.entries[i].feature);
    }
  }

  bool created = false;
  if (!fs::exists(args.out_dir)) {
    fs::create_directories(args.out_dir);
    created = true;
  } else if (!fs::is_directory(args.out_dir)) {
    throw config_error("output path " + args.out_dir + " is not a directory");
  }

  std::vector<fs::path> written;
  auto emit = [&](const std::string& name, const std::string& content) {
    const fs::path path = fs::path(args.out_dir) / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw error("cannot open " + path.string() + " for writing");
    out << content;
    if (!out) throw error("failed writing " + path.string());
    written.push_back(path);
  };
  try {
    emit("shap_rows.csv", shap_rows_csv(summary));
    emit("shap_summary.csv", shap_summary_csv(summary));
    emit("shap_summary.svg", shap_beeswarm_svg(summary));
    for (const auto& feature : features) {
      const auto points = shap_dependence(feature, summary.rows);
      emit("shap_dependence_" + feature + ".csv", dependence_csv(points));
      emit("shap_dependence_" + feature + ".svg",
           shap_dependence_svg(feature, points));
    }
  } catch (...) {
    for (const auto& path : written) {
      std::error_code ec;
      fs::remove(path, ec);
    }
    if (created) {
      std::error_code ec;
      fs::remove(args.out_dir, ec);
    }
    throw;
  }
  std::printf("wrote %zu attribution files to %s\n", written.size(),
              args.out_dir.c_str());
  return 0;
}

// --- compare -----------------------------------------------------------------

struct CompareArgs {
  std::string config_path;
  std::string family_a;
  std::string family_b;
  std::string out;
};

ModelSpec spec_for_family(const RunConfig& config, const std::string& name) {
  const ModelFamily family = family_from_name(name);
  for (const auto& spec : config.models) {
    if (spec.family == family) return spec;
  }
  return default_spec(family, config.seed);
}

int cmd_compare(const CompareArgs& args) {
  const RunConfig config = config_or_default(args.config_path);
  const ModelSpec spec_a = spec_for_family(config, args.family_a);
  const ModelSpec spec_b = spec_for_family(config, args.family_b);
  const DataStage data = run_data_stage(config);
  const FiveByTwoResult result =
      five_by_two_ttest(spec_a, spec_b, data.rows, config.seed);
  emit_document(args.out, compare_json(spec_a.family, spec_b.family,
                                       config.seed, result)
                                  .dump(2) +
                              "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Stress-window detection from wearable heart-rate and accelerometer "
      "streams",
      "stresskit"};
  app.set_version_flag("--version",
                       std::string(stresskit::kAppName) + " " +
                           stresskit::kVersion);
  app.require_subcommand(1);

  SynthArgs synth_args;
  auto* synth = app.add_subcommand(
      "synth", "Generate a synthetic cohort as per-participant CSV files");
  synth->add_option("--out", synth_args.out, "Output directory")->required();
  synth->add_option("--config", synth_args.config_path,
                    "Cohort config JSON file");
  synth->add_option("--participants", synth_args.participants,
                    "Number of participants");
  synth->add_option("--days", synth_args.days,
                    "Recording span per participant, in days");
  synth->add_option("--events-per-day", synth_args.events_per_day,
                    "Rate of self-reported stress events");
  synth->add_option("--baseline-hr-mean", synth_args.baseline_hr_mean,
                    "Mean resting heart rate across participants (bpm)");
  synth->add_option("--baseline-hr-sd", synth_args.baseline_hr_sd,
                    "Spread of per-participant resting rates (bpm)");
  synth->add_option("--delta-std-hr", synth_args.delta_std_hr,
                    "Extra heart-rate standard deviation during stress (bpm)");
  synth->add_option("--delta-min-hr", synth_args.delta_min_hr,
                    "Transient-dip suppression during stress (bpm)");
  synth->add_option("--acc-burst-amp", synth_args.acc_burst_amp,
                    "Tremor burst amplitude during stress (m/s^2)");
  synth->add_option("--seed", synth_args.seed, "Cohort seed");

  RunArgs run_args;
  auto* run = app.add_subcommand(
      "run", "Run the full pipeline and write a report bundle");
  run->add_option("--config", run_args.config_path, "Run config JSON file");
  run->add_flag("--synth-default", run_args.synth_default,
                "Use the built-in synthetic cohort and default models");
  run->add_option("--report-dir", run_args.report_dir,
                  "Report output directory (must be new or empty)")
      ->envname("STRESSKIT_REPORT_DIR");
  run->add_option("--dump-windows", run_args.dump_windows,
                  "Also write the extracted windows as JSON lines to this "
                  "file");

  TrainArgs train_args;
  auto* train =
      app.add_subcommand("train", "Train one model and save it to a file");
  train->add_option("--config", train_args.config_path,
                    "Run config JSON file (defaults to the built-in config)");
  train->add_option("--out", train_args.out, "Model output file")->required();
  train->add_option("--family", train_args.family,
                    "Model family to train (defaults to the primary model)");

  EvalArgs eval_args;
  auto* eval =
      app.add_subcommand("eval", "Evaluate a saved model on a config's split");
  eval->add_option("--config", eval_args.config_path,
                   "Run config JSON file (defaults to the built-in config)");
  eval->add_option("--model", eval_args.model_path, "Saved model file")
      ->required();
  eval->add_option("--out", eval_args.out,
                   "Metrics JSON output file (defaults to stdout)");
  eval->add_option("--scenarios-out", eval_args.scenarios_out,
                   "Also write the operating-scenario table to this file");

  ExplainArgs explain_args;
  auto* explain = app.add_subcommand(
      "explain", "Per-feature SHAP attribution for a saved tree model");
  explain->add_option("--config", explain_args.config_path,
                      "Run config JSON file (defaults to the built-in "
                      "config)");
  explain->add_option("--model", explain_args.model_path, "Saved model file")
      ->required();
  explain->add_option("--out-dir", explain_args.out_dir, "Output directory")
      ->required();
  explain->add_option("--feature", explain_args.features,
                      "Feature for a dependence plot (repeatable; defaults "
                      "to the top three by mean |shap|)");

  CompareArgs compare_args;
  auto* compare = app.add_subcommand(
      "compare", "Paired t-test between two model families");
  compare->add_option("--config", compare_args.config_path,
                      "Run config JSON file (defaults to the built-in "
                      "config)");
  compare->add_option("--family-a", compare_args.family_a, "First family")
      ->required();
  compare->add_option("--family-b", compare_args.family_b, "Second family")
      ->required();
  compare->add_option("--out", compare_args.out,
                      "Comparison JSON output file (defaults to stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error("usage", e.what());
    return 2;
  }

  try {
    if (app.got_subcommand(synth)) return cmd_synth(synth_args);
    if (app.got_subcommand(run)) return cmd_run(run_args);
    if (app.got_subcommand(train)) return cmd_train(train_args);
    if (app.got_subcommand(eval)) return cmd_eval(eval_args);
    if (app.got_subcommand(explain)) return cmd_explain(explain_args);
    if (app.got_subcommand(compare)) return cmd_compare(compare_args);
  } catch (const stresskit::config_error& e) {
    print_error("config", e.what());
    return 2;
  } catch (const stresskit::format_error& e) {
    print_error("format", e.what());
    return 1;
  } catch (const stresskit::train_error& e) {
    print_error("train", e.what());
    return 1;
  } catch (const stresskit::eval_error& e) {
    print_error("eval", e.what());
    return 1;
  } catch (const stresskit::explain_error& e) {
    print_error("explain", e.what());
    return 1;
  } catch (const stresskit::error& e) {
    print_error("error", e.what());
    return 1;
  } catch (const std::exception& e) {
    print_error("internal", e.what());
    return 1;
  }
  return 0;
}
