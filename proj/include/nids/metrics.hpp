#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nids/matrix.hpp"

namespace nids {

// Positive class is attack (label 1).
struct ConfusionMatrix {
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    std::uint64_t tn = 0;
    std::uint64_t fn = 0;

    std::uint64_t total() const { return tp + fp + tn + fn; }

    bool operator==(const ConfusionMatrix&) const = default;
};

ConfusionMatrix confusion(const std::vector<int>& labels, const std::vector<int>& predictions);

// Ratio with a degenerate flag instead of an error when the denominator is
// zero (the value is 0 in that case).
struct Rate {
    double value = 0.0;
    bool degenerate = false;
};

Rate accuracy_pct(const ConfusionMatrix& cm);  // (tp+tn)/total * 100
Rate tpr(const ConfusionMatrix& cm);           // tp / (tp+fn)
Rate fpr(const ConfusionMatrix& cm);           // fp / (fp+tn)
Rate fnr(const ConfusionMatrix& cm);           // fn / (fn+tp)

struct RocPoint {
    double threshold;
    double fpr;
    double tpr;
};

struct RocCurve {
    std::vector<RocPoint> points;  // fpr/tpr non-decreasing, endpoints (0,0) and (1,1)
    bool degenerate = false;       // single-class labels
};

// One point per unique score (descending), sentinel threshold above the
// maximum, prediction rule score >= threshold.
RocCurve roc(const std::vector<int>& labels, const std::vector<float>& scores);

// Trapezoidal area over fpr; empty when the curve is degenerate.
std::optional<double> auc(const RocCurve& curve);

struct BenchmarkResult {
    double wall_seconds = 0.0;
    double records_per_second = 0.0;
    int thread_count = 0;
    std::uint64_t record_count = 0;
};

struct EvalReport {
    Rate accuracy;  // percent
    ConfusionMatrix cm;
    Rate fpr_rate;                    // per-class: fp / (fp+tn)
    Rate fnr_rate;                    // per-class: fn / (fn+tp)
    double fp_pct_of_total = 0.0;     // overall normalization, labeled separately
    double fn_pct_of_total = 0.0;
    std::optional<double> auc_value;
    RocCurve curve;
    std::optional<BenchmarkResult> timing;
};

EvalReport evaluate(const std::vector<int>& labels, const std::vector<float>& scores,
                    double threshold = 0.5);

std::string confusion_grid(const ConfusionMatrix& cm);
std::string report_text(const EvalReport& report);
std::string report_json_text(const EvalReport& report);

void write_roc_csv(const std::string& path, const RocCurve& curve);
// Appends one row (with a header when creating the file).
void append_benchmark_csv(const std::string& path, const std::string& model,
                          const std::string& domain, const BenchmarkResult& result);

} // namespace nids
