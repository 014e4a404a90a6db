#include "nids/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "nids/errors.hpp"
#include "nids/kv.hpp"

namespace nids {

ConfusionMatrix confusion(const std::vector<int>& labels, const std::vector<int>& predictions) {
    if (labels.size() != predictions.size())
        fail("E_ARGS", "labels and predictions differ in length: " +
                           std::to_string(labels.size()) + " vs " +
                           std::to_string(predictions.size()));
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        int y = labels[i];
        int p = predictions[i];
        if ((y != 0 && y != 1) || (p != 0 && p != 1))
            fail("E_ARGS", "non-binary value at index " + std::to_string(i));
        if (y == 1)
            p == 1 ? ++cm.tp : ++cm.fn;
        else
            p == 1 ? ++cm.fp : ++cm.tn;
    }
    return cm;
}

namespace {

Rate ratio(std::uint64_t num, std::uint64_t den, double scale = 1.0) {
    if (den == 0) return {0.0, true};
    return {scale * static_cast<double>(num) / static_cast<double>(den), false};
}

} // namespace

Rate accuracy_pct(const ConfusionMatrix& cm) { return ratio(cm.tp + cm.tn, cm.total(), 100.0); }
Rate tpr(const ConfusionMatrix& cm) { return ratio(cm.tp, cm.tp + cm.fn); }
Rate fpr(const ConfusionMatrix& cm) { return ratio(cm.fp, cm.fp + cm.tn); }
Rate fnr(const ConfusionMatrix& cm) { return ratio(cm.fn, cm.fn + cm.tp); }

RocCurve roc(const std::vector<int>& labels, const std::vector<float>& scores) {
    if (labels.size() != scores.size()) fail("E_ARGS", "labels/scores length mismatch");
    std::uint64_t positives = 0, negatives = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] != 0 && labels[i] != 1)
            fail("E_ARGS", "non-binary label at index " + std::to_string(i));
        if (!(scores[i] >= 0.0f && scores[i] <= 1.0f))
            fail("E_ARGS", "score outside [0,1] at index " + std::to_string(i));
        labels[i] ? ++positives : ++negatives;
    }

    RocCurve curve;
    const double inf = std::numeric_limits<double>::infinity();
    if (positives == 0 || negatives == 0) {
        curve.degenerate = true;
        curve.points = {{inf, 0.0, 0.0}, {-inf, 1.0, 1.0}};
        return curve;
    }

    std::vector<std::size_t> order(labels.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        return a < b;
    });

    curve.points.push_back({inf, 0.0, 0.0});  // sentinel above every score
    std::uint64_t tp = 0, fp = 0;
    std::size_t i = 0;
    while (i < order.size()) {
        float s = scores[order[i]];
        // consume the whole tie group at this threshold
        while (i < order.size() && scores[order[i]] == s) {
            labels[order[i]] ? ++tp : ++fp;
            ++i;
        }
        curve.points.push_back({static_cast<double>(s),
                                static_cast<double>(fp) / static_cast<double>(negatives),
                                static_cast<double>(tp) / static_cast<double>(positives)});
    }
    return curve;
}

std::optional<double> auc(const RocCurve& curve) {
    if (curve.degenerate) return std::nullopt;
    double area = 0.0;
    for (std::size_t i = 1; i < curve.points.size(); ++i) {
        const auto& a = curve.points[i - 1];
        const auto& b = curve.points[i];
        area += (b.fpr - a.fpr) * (a.tpr + b.tpr) / 2.0;
    }
    return area;
}

EvalReport evaluate(const std::vector<int>& labels, const std::vector<float>& scores,
                    double threshold) {
    if (labels.size() != scores.size()) fail("E_ARGS", "labels/scores length mismatch");
    std::vector<int> predictions(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i)
        predictions[i] = scores[i] >= threshold ? 1 : 0;

    EvalReport report;
    report.cm = confusion(labels, predictions);
    report.accuracy = accuracy_pct(report.cm);
    report.fpr_rate = fpr(report.cm);
    report.fnr_rate = fnr(report.cm);
    std::uint64_t total = report.cm.total();
    report.fp_pct_of_total = total ? 100.0 * static_cast<double>(report.cm.fp) / total : 0.0;
    report.fn_pct_of_total = total ? 100.0 * static_cast<double>(report.cm.fn) / total : 0.0;
    report.curve = roc(labels, scores);
    report.auc_value = auc(report.curve);
    return report;
}

namespace {

std::string pct(double value) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f%%", value);
    return buf;
}

} // namespace

std::string confusion_grid(const ConfusionMatrix& cm) {
    std::ostringstream out;
    auto cell = [](std::uint64_t v) {
        std::string s = std::to_string(v);
        return std::string(s.size() < 12 ? 12 - s.size() : 0, ' ') + s;
    };
    out << "                     predicted\n";
    out << "                   attack      normal\n";
    out << "actual attack " << cell(cm.tp) << cell(cm.fn) << "\n";
    out << "actual normal " << cell(cm.fp) << cell(cm.tn) << "\n";
    return out.str();
}

std::string report_text(const EvalReport& report) {
    std::ostringstream out;
    out << "records:   " << report.cm.total() << "\n";
    out << "accuracy:  " << pct(report.accuracy.value)
        << (report.accuracy.degenerate ? " (degenerate)" : "") << "\n";
    out << "\n" << confusion_grid(report.cm) << "\n";
    out << "FPR (of normals):  " << pct(100.0 * report.fpr_rate.value)
        << (report.fpr_rate.degenerate ? " (degenerate)" : "") << "\n";
    out << "FNR (of attacks):  " << pct(100.0 * report.fnr_rate.value)
        << (report.fnr_rate.degenerate ? " (degenerate)" : "") << "\n";
    out << "FP  (of all):      " << pct(report.fp_pct_of_total) << "\n";
    out << "FN  (of all):      " << pct(report.fn_pct_of_total) << "\n";
    if (report.auc_value)
        out << "AUC:               " << format_double(*report.auc_value) << "\n";
    else
        out << "AUC:               undefined (single-class labels)\n";
    if (report.timing) {
        out << "wall seconds:      " << format_double(report.timing->wall_seconds) << "\n";
        out << "records/second:    " << format_double(report.timing->records_per_second) << "\n";
        out << "threads:           " << report.timing->thread_count << "\n";
    }
    return out.str();
}

std::string report_json_text(const EvalReport& report) {
    nlohmann::json j;
    j["records"] = report.cm.total();
    j["accuracy_pct"] = report.accuracy.value;
    j["confusion"] = {{"tp", report.cm.tp}, {"fp", report.cm.fp}, {"tn", report.cm.tn},
                      {"fn", report.cm.fn}};
    j["fpr_of_normals"] = report.fpr_rate.value;
    j["fnr_of_attacks"] = report.fnr_rate.value;
    j["fp_pct_of_total"] = report.fp_pct_of_total;
    j["fn_pct_of_total"] = report.fn_pct_of_total;
    if (report.auc_value)
        j["auc"] = *report.auc_value;
    else
        j["auc"] = nullptr;
    if (report.timing) {
        j["timing"] = {{"wall_seconds", report.timing->wall_seconds},
                       {"records_per_second", report.timing->records_per_second},
                       {"threads", report.timing->thread_count},
                       {"records", report.timing->record_count}};
    }
    return j.dump(2) + "\n";
}

void write_roc_csv(const std::string& path, const RocCurve& curve) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail("E_IO", "cannot write '" + path + "'");
    out << "threshold,fpr,tpr\n";
    for (const auto& p : curve.points)
        out << format_double(p.threshold) << "," << format_double(p.fpr) << ","
            << format_double(p.tpr) << "\n";
    if (!out) fail("E_IO", "write failed for '" + path + "'");
}

void append_benchmark_csv(const std::string& path, const std::string& model,
                          const std::string& domain, const BenchmarkResult& result) {
    bool exists = std::filesystem::exists(path);
    std::ofstream out(path, std::ios::binary | std::ios::app);
    if (!out) fail("E_IO", "cannot write '" + path + "'");
    if (!exists) out << "model,domain,threads,wall_seconds,records_per_second\n";
    out << model << "," << domain << "," << result.thread_count << ","
        << format_double(result.wall_seconds) << "," << format_double(result.records_per_second)
        << "\n";
    if (!out) fail("E_IO", "write failed for '" + path + "'");
}

} // namespace nids
