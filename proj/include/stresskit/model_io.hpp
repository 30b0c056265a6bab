#pragma once

#include <filesystem>
#include <string>

#include "stresskit/model.hpp"

namespace stresskit {

// On-disk model format version. Bump when the JSON layout changes shape;
// loaders refuse versions they do not know.
inline constexpr int kModelFormatVersion = 1;

// Self-describing JSON: format_version, family, hyperparameters, the
// fitted standardizer, and the family's state block (trees as nested
// node objects, coefficient arrays, support vectors + Platt parameters,
// or neighbor tables). Numbers round-trip exactly (shortest-form
// doubles). Key order and indentation are fixed, so equal models
// serialize to equal bytes.
std::string model_to_json(const TrainedModel& model);

// Inverse of model_to_json. Throws format_error on malformed JSON, an
// unknown format_version, or a structurally invalid model.
TrainedModel model_from_json(const std::string& text);

void save_model(const TrainedModel& model, const std::filesystem::path& path);
TrainedModel load_model(const std::filesystem::path& path);

}  // namespace stresskit
