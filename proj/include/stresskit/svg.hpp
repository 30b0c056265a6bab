#pragma once

#include <string>
#include <vector>

#include "stresskit/evaluation.hpp"
#include "stresskit/explain.hpp"

namespace stresskit {

// Self-contained SVG renderers for the report bundle. Output is a pure
// function of the inputs — fixed canvas, fixed-precision coordinates,
// and jitter derived from row indices — so identical inputs produce
// byte-identical documents.

// ROC curve with the chance diagonal; `subtitle` is printed under the
// title (typically the AUC).
std::string roc_svg(const std::vector<RocPoint>& roc,
                    const std::string& title,
                    const std::string& subtitle);

// Beeswarm-style summary: one horizontal band per feature in importance
// order (rank 1 on top), points placed by attribution value, vertical
// jitter seeded from the row index, fill colored by the feature value's
// position within its observed range.
std::string shap_beeswarm_svg(const ShapSummary& summary);

// Scatter of (feature value, attribution) pairs for one feature.
std::string shap_dependence_svg(const std::string& feature,
                                const std::vector<DependencePoint>& points);

}  // namespace stresskit
