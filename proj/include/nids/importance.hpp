#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "nids/matrix.hpp"

namespace nids {

struct ExtraTreesConfig {
    int tree_count = 100;
    int candidate_features = 0;   // 0 = ceil(sqrt(feature count))
    int min_samples_split = 2;
    std::uint64_t seed = 42;
    int threads = 0;              // 0 = hardware concurrency
};

struct ImportanceReport {
    std::map<std::string, double> scores;  // per feature, normalized to sum 1
    int tree_count = 0;
    std::uint64_t seed = 0;
    // True when no split was possible anywhere (constant X or single-class
    // labels); all scores are exactly 0 in that case.
    bool degenerate = false;
};

// Grows an ensemble of extremely randomized trees: at every node a random
// subset of features is drawn, each gets one uniform random cut-point
// between its node-local min and max, and the candidate with the largest
// Gini impurity decrease wins. A feature's importance is its accumulated
// sample-weighted impurity decrease over all trees.
ImportanceReport fit_importance(const FeatureMatrix& X, const LabelVector& y,
                                const ExtraTreesConfig& config);

struct FeatureSelection {
    std::vector<std::string> kept;  // importance-descending, ties by name
    int k = 0;

    bool operator==(const FeatureSelection&) const = default;
};

FeatureSelection select_top_k(const ImportanceReport& report, int k);

// (feature,score) rows, score-descending. The report artifact behind the
// importance bar chart.
void write_importance_csv(const std::string& path, const ImportanceReport& report);

// Standalone plain-text form: "k = <n>" plus one "kept.<rank> = <name>"
// line per feature.
std::string selection_to_kv_text(const FeatureSelection& selection);
FeatureSelection selection_from_kv_text(const std::string& text);

} // namespace nids
