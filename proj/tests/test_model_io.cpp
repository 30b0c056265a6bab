#include <array>
#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "stresskit/error.hpp"
#include "stresskit/model.hpp"
#include "stresskit/model_io.hpp"
#include "stresskit/rng.hpp"

using namespace stresskit;

namespace {

std::vector<FeatureVector> training_rows(std::size_t n, std::uint64_t seed) {
  std::vector<FeatureVector> rows;
  Rng rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    FeatureVector f;
    f.participant_id = "p" + std::to_string(1 + i % 6);
    for (auto& v : f.v) v = rng.next_normal();
    const double signal = f.v[2] + 0.5 * f.v[7] + 0.3 * rng.next_normal();
    f.label = signal > 0.4 ? Label::stress : Label::nonstress;
    rows.push_back(f);
  }
  return rows;
}

const std::vector<ModelFamily> kAllFamilies = {
    ModelFamily::gbt, ModelFamily::random_forest, ModelFamily::glm,
    ModelFamily::lda, ModelFamily::svm_rbf,       ModelFamily::knn};

}  // namespace

TEST_SUITE("model_io") {
  TEST_CASE("every family round-trips through JSON with identical scores") {
    const auto rows = training_rows(160, 11);
    const auto probes = training_rows(50, 12);
    for (const auto family : kAllFamilies) {
      CAPTURE(family_name(family));
      const auto model = train_model(default_spec(family, 5), rows);
      const std::string text = model_to_json(model);
      const auto loaded = model_from_json(text);
      CHECK(loaded.spec.family == model.spec.family);
      CHECK(loaded.spec.numeric == model.spec.numeric);
      CHECK(loaded.spec.categorical == model.spec.categorical);
      CHECK(loaded.spec.seed == model.spec.seed);
      CHECK(loaded.warnings == model.warnings);
      for (const auto& p : probes) {
        CHECK(loaded.score(p.v) == model.score(p.v));
        if (model.is_tree_family()) {
          CHECK(loaded.margin(p.v) == model.margin(p.v));
        }
      }
      // Serialization is canonical: a reloaded model prints the same bytes.
      CHECK(model_to_json(loaded) == text);
    }
  }

  TEST_CASE("file save and load round-trips") {
    namespace fs = std::filesystem;
    const auto rows = training_rows(120, 3);
    const auto model = train_model(default_spec(ModelFamily::gbt, 9), rows);
    const fs::path path = fs::temp_directory_path() / "stresskit_model.json";
    save_model(model, path);
    const auto loaded = load_model(path);
    fs::remove(path);
    CHECK(model_to_json(loaded) == model_to_json(model));
  }

  TEST_CASE("malformed inputs are rejected as format errors") {
    CHECK_THROWS_AS(model_from_json("not json"), format_error);
    CHECK_THROWS_AS(model_from_json("[1,2,3]"), format_error);
    CHECK_THROWS_AS(model_from_json("{}"), format_error);
    CHECK_THROWS_AS(load_model("/nonexistent/model.json"), format_error);
  }

  TEST_CASE("unknown format versions are refused") {
    const auto rows = training_rows(80, 4);
    const auto model = train_model(default_spec(ModelFamily::glm, 1), rows);
    auto j = nlohmann::json::parse(model_to_json(model));
    j["format_version"] = 99;
    CHECK_THROWS_AS(model_from_json(j.dump()), format_error);
  }

  TEST_CASE("structural tampering is caught") {
    const auto rows = training_rows(80, 4);
    auto tamper = [&](ModelFamily family, auto mutate) {
      const auto model = train_model(default_spec(family, 1), rows);
      auto j = nlohmann::json::parse(model_to_json(model));
      mutate(j);
      CHECK_THROWS_AS(model_from_json(j.dump()), format_error);
    };
    tamper(ModelFamily::glm, [](nlohmann::json& j) { j["extra"] = 1; });
    tamper(ModelFamily::glm,
           [](nlohmann::json& j) { j["coef"].erase(j["coef"].begin()); });
    tamper(ModelFamily::knn, [](nlohmann::json& j) {
      j["labels"].erase(j["labels"].begin());
    });
    tamper(ModelFamily::svm_rbf, [](nlohmann::json& j) {
      j["dual_coef"].push_back(0.5);
    });
    tamper(ModelFamily::gbt, [](nlohmann::json& j) { j["trees"] = nlohmann::json::array(); });
    tamper(ModelFamily::gbt, [](nlohmann::json& j) {
      j["trees"][0]["feature"] = 99;
    });
    tamper(ModelFamily::gbt, [](nlohmann::json& j) {
      j["feature_names"][0] = "unexpected";
    });
    tamper(ModelFamily::gbt, [](nlohmann::json& j) {
      j["hyperparameters"]["n_estimators"] = -5;
    });
  }
}
