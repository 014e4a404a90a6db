#include "nids/scaler.hpp"

#include <algorithm>

#include "nids/errors.hpp"
#include "nids/kv.hpp"

namespace nids {

ScalerParams fit_scaler(const FeatureMatrix& X_train, const FeatureSelection& selection) {
    if (X_train.rows == 0) fail("E_ARGS", "cannot fit a scaler on an empty matrix");
    ScalerParams params;
    for (const auto& name : selection.kept) {
        std::size_t c = X_train.col_index(name);
        double lo = X_train.at(0, c);
        double hi = lo;
        for (std::size_t r = 1; r < X_train.rows; ++r) {
            double v = X_train.at(r, c);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        params.ranges[name] = {lo, hi};
    }
    return params;
}

FeatureMatrix transform(const FeatureMatrix& X, const FeatureSelection& selection,
                        const ScalerParams& scaler, bool clamp) {
    std::vector<std::size_t> src(selection.kept.size());
    std::vector<ScalerParams::Range> ranges(selection.kept.size());
    for (std::size_t c = 0; c < selection.kept.size(); ++c) {
        const auto& name = selection.kept[c];
        src[c] = X.col_index(name);
        auto it = scaler.ranges.find(name);
        if (it == scaler.ranges.end())
            fail("E_SCHEMA", "scaler has no range for column '" + name + "'");
        ranges[c] = it->second;
    }

    FeatureMatrix out = FeatureMatrix::zeros(selection.kept, X.rows);
    for (std::size_t r = 0; r < X.rows; ++r) {
        for (std::size_t c = 0; c < src.size(); ++c) {
            const auto& range = ranges[c];
            double v;
            if (range.max > range.min) {
                v = (X.at(r, src[c]) - range.min) / (range.max - range.min);
                if (clamp) v = std::clamp(v, 0.0, 1.0);
            } else {
                v = 0.0;  // constant column
            }
            out.at(r, c) = v;
        }
    }
    return out;
}

std::string scaler_to_kv_text(const ScalerParams& scaler) {
    KvDoc doc;
    for (const auto& [name, range] : scaler.ranges) {
        doc.set("min." + name, range.min);
        doc.set("max." + name, range.max);
    }
    return doc.dump();
}

ScalerParams scaler_from_kv_text(const std::string& text) {
    KvDoc doc = KvDoc::parse(text);
    ScalerParams scaler;
    for (const auto& [key, value] : doc.entries()) {
        if (key.rfind("min.", 0) == 0)
            scaler.ranges[key.substr(4)].min = parse_double(value, key);
        else if (key.rfind("max.", 0) == 0)
            scaler.ranges[key.substr(4)].max = parse_double(value, key);
        else
            fail("E_PARSE", "unexpected scaler key '" + key + "'");
    }
    return scaler;
}

} // namespace nids
