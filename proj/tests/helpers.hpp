#pragma once

// Shared generators and independent oracles for the test suites. Oracles
// here must stay independent of the implementation paths they check.

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "nids/dataset.hpp"
#include "nids/matrix.hpp"
#include "nids/rng.hpp"
#include "nids/schema.hpp"

namespace testutil {

// Minimal schema with `features` numeric columns f00.. plus label and
// attack_cat.
inline nids::ColumnSchema numeric_schema(std::size_t features) {
    std::vector<nids::Column> cols;
    char name[16];
    for (std::size_t i = 0; i < features; ++i) {
        std::snprintf(name, sizeof(name), "f%02zu", i);
        cols.push_back({name, nids::ColumnKind::numeric});
    }
    cols.push_back({"attack_cat", nids::ColumnKind::attack_cat});
    cols.push_back({"label", nids::ColumnKind::label});
    return nids::ColumnSchema(std::move(cols));
}

inline nids::FlowRecord numeric_record(std::vector<double> values, int label) {
    nids::FlowRecord rec;
    rec.numeric = std::move(values);
    rec.label = label;
    if (label) rec.attack_cat = "Generic";
    return rec;
}

// n label-only records, `positives` of them attacks.
inline std::vector<nids::FlowRecord> label_records(std::size_t n, std::size_t positives) {
    std::vector<nids::FlowRecord> records;
    records.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        records.push_back(numeric_record({}, i < positives ? 1 : 0));
    return records;
}

// Brute-force Mann-Whitney statistic: (concordant + 0.5 * tied) over all
// positive/negative pairs.
inline double mann_whitney_auc(const std::vector<int>& labels,
                               const std::vector<float>& scores) {
    double concordant = 0.0, tied = 0.0;
    std::uint64_t pairs = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] != 1) continue;
        for (std::size_t j = 0; j < labels.size(); ++j) {
            if (labels[j] != 0) continue;
            ++pairs;
            if (scores[i] > scores[j])
                concordant += 1.0;
            else if (scores[i] == scores[j])
                tied += 1.0;
        }
    }
    return pairs ? (concordant + 0.5 * tied) / static_cast<double>(pairs) : 0.0;
}

inline double rel_err(double a, double b) {
    double scale = std::max({1.0, std::abs(a), std::abs(b)});
    return std::abs(a - b) / scale;
}

// Linearly separable dataset with unit margin: rejection-samples uniform
// rows until |w.x - t| >= margin, labels by the sign.
struct Separable {
    nids::FeatureMatrix X;
    nids::LabelVector y;
};

inline Separable make_separable(std::size_t rows, std::size_t features, std::uint64_t seed,
                                double margin = 1.0) {
    auto rng = nids::make_rng(seed);
    std::vector<double> w(features);
    double norm = 0.0;
    for (auto& wi : w) {
        wi = 2.0 * nids::unit(rng) - 1.0;
        norm += wi * wi;
    }
    norm = std::sqrt(norm);
    for (auto& wi : w) wi *= 4.0 / norm;  // scale so the margin band is reachable
    double threshold = 0.0;               // center the boundary at the mean input
    for (double wi : w) threshold += wi * 0.5;

    std::vector<std::string> names;
    char name[16];
    for (std::size_t i = 0; i < features; ++i) {
        std::snprintf(name, sizeof(name), "f%02zu", i);
        names.push_back(name);
    }
    Separable out;
    out.X = nids::FeatureMatrix::zeros(names, rows);
    out.y.resize(rows);

    std::vector<double> x(features);
    std::size_t r = 0;
    while (r < rows) {
        double s = -threshold;
        for (std::size_t i = 0; i < features; ++i) {
            x[i] = nids::unit(rng);
            s += w[i] * x[i];
        }
        if (std::abs(s) < margin) continue;
        for (std::size_t i = 0; i < features; ++i) out.X.at(r, i) = x[i];
        out.y[r] = s > 0 ? 1 : 0;
        ++r;
    }
    return out;
}

// FlowRecords whose numeric features are uniform noise except that column
// `planted` equals the label. Used by the importance tests.
inline std::pair<nids::FeatureMatrix, nids::LabelVector> planted_dataset(
    std::size_t rows, std::size_t features, std::size_t planted, std::uint64_t seed) {
    auto rng = nids::make_rng(seed);
    std::vector<std::string> names;
    char name[16];
    for (std::size_t i = 0; i < features; ++i) {
        std::snprintf(name, sizeof(name), "c%02zu", i);
        names.push_back(name);
    }
    auto X = nids::FeatureMatrix::zeros(names, rows);
    nids::LabelVector y(rows);
    for (std::size_t r = 0; r < rows; ++r) {
        y[r] = r % 2 == 0 ? 1 : 0;  // balanced
        for (std::size_t c = 0; c < features; ++c)
            X.at(r, c) = c == planted ? static_cast<double>(y[r]) : nids::unit(rng);
    }
    return {std::move(X), std::move(y)};
}

// Exhaustive best-single-split search: every feature, every midpoint
// between adjacent sorted values; returns the best Gini decrease per
// feature (weighted by node fraction, here the root so weight 1).
inline std::vector<double> best_split_decrease_per_feature(const nids::FeatureMatrix& X,
                                                           const nids::LabelVector& y) {
    const std::size_t n = X.rows, d = X.cols();
    auto gini = [](std::size_t pos, std::size_t total) {
        if (total == 0) return 0.0;
        double p = static_cast<double>(pos) / total;
        return 1.0 - p * p - (1.0 - p) * (1.0 - p);
    };
    std::size_t total_pos = 0;
    for (int label : y) total_pos += label;
    double parent = gini(total_pos, n);

    std::vector<double> best(d, 0.0);
    for (std::size_t f = 0; f < d; ++f) {
        std::vector<std::pair<double, int>> vals(n);
        for (std::size_t r = 0; r < n; ++r) vals[r] = {X.at(r, f), y[r]};
        std::sort(vals.begin(), vals.end());
        std::size_t left_n = 0, left_pos = 0;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            ++left_n;
            left_pos += vals[i].second;
            if (vals[i].first == vals[i + 1].first) continue;  // no cut between equals
            double child =
                (left_n * gini(left_pos, left_n) +
                 (n - left_n) * gini(total_pos - left_pos, n - left_n)) /
                static_cast<double>(n);
            best[f] = std::max(best[f], parent - child);
        }
    }
    return best;
}

} // namespace testutil
