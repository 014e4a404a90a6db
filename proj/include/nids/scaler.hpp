#pragma once

#include <map>
#include <string>

#include "nids/importance.hpp"
#include "nids/matrix.hpp"

namespace nids {

// Per-feature min/max fitted on training data only.
struct ScalerParams {
    struct Range {
        double min = 0.0;
        double max = 0.0;

        bool operator==(const Range&) const = default;
    };
    std::map<std::string, Range> ranges;

    bool operator==(const ScalerParams&) const = default;
};

ScalerParams fit_scaler(const FeatureMatrix& X_train, const FeatureSelection& selection);

// Projects X onto the selected columns (selection order) and rescales each
// cell to (x - min) / (max - min). With clamping on, results are pinned to
// [0,1]; a constant column maps to 0 uniformly either way.
FeatureMatrix transform(const FeatureMatrix& X, const FeatureSelection& selection,
                        const ScalerParams& scaler, bool clamp = true);

// Standalone plain-text form: "min.<name>" / "max.<name>" per feature.
std::string scaler_to_kv_text(const ScalerParams& scaler);
ScalerParams scaler_from_kv_text(const std::string& text);

} // namespace nids
