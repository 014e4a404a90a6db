#include "nids/importance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <thread>

#include "nids/errors.hpp"
#include "nids/kv.hpp"
#include "nids/rng.hpp"

namespace nids {

namespace {

struct NodeRange {
    std::size_t begin;
    std::size_t end;
    std::size_t positives;
};

double gini(std::size_t positives, std::size_t total) {
    if (total == 0) return 0.0;
    double p1 = static_cast<double>(positives) / static_cast<double>(total);
    double p0 = 1.0 - p1;
    return 1.0 - p0 * p0 - p1 * p1;
}

// One tree's importance contribution. Works on a private index buffer that
// gets partitioned in place as nodes split.
void grow_tree(const FeatureMatrix& X, const LabelVector& y, const ExtraTreesConfig& config,
               std::uint64_t tree_seed, std::vector<double>& importance) {
    const std::size_t n = X.rows;
    const std::size_t d = X.cols();
    const std::size_t k = config.candidate_features > 0
                              ? std::min<std::size_t>(config.candidate_features, d)
                              : static_cast<std::size_t>(
                                    std::ceil(std::sqrt(static_cast<double>(d))));

    std::mt19937_64 rng(tree_seed);
    std::vector<std::size_t> indices(n);
    for (std::size_t i = 0; i < n; ++i) indices[i] = i;
    std::size_t total_pos = 0;
    for (int label : y) total_pos += label == 1;

    std::vector<std::size_t> feature_pool(d);
    for (std::size_t f = 0; f < d; ++f) feature_pool[f] = f;

    std::vector<NodeRange> stack;
    stack.push_back({0, n, total_pos});

    while (!stack.empty()) {
        NodeRange node = stack.back();
        stack.pop_back();
        const std::size_t size = node.end - node.begin;
        if (node.positives == 0 || node.positives == size) continue;  // pure
        if (size < static_cast<std::size_t>(config.min_samples_split)) continue;

        // Draw k distinct candidate features (partial Fisher-Yates).
        for (std::size_t i = 0; i < k; ++i) {
            std::size_t j = i + bounded(rng, d - i);
            std::swap(feature_pool[i], feature_pool[j]);
        }

        double parent_gini = gini(node.positives, size);
        double best_decrease = 0.0;
        std::size_t best_feature = d;
        double best_cut = 0.0;

        for (std::size_t c = 0; c < k; ++c) {
            std::size_t f = feature_pool[c];
            double lo = X.at(indices[node.begin], f);
            double hi = lo;
            for (std::size_t i = node.begin + 1; i < node.end; ++i) {
                double v = X.at(indices[i], f);
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            if (!(hi > lo)) continue;  // constant within the node
            double cut = lo + unit_open(rng) * (hi - lo);
            if (!(cut > lo && cut < hi)) continue;  // rounding collapsed the interval

            std::size_t left_count = 0, left_pos = 0;
            for (std::size_t i = node.begin; i < node.end; ++i) {
                if (X.at(indices[i], f) <= cut) {
                    ++left_count;
                    left_pos += y[indices[i]] == 1;
                }
            }
            std::size_t right_count = size - left_count;
            std::size_t right_pos = node.positives - left_pos;
            double child_gini =
                (static_cast<double>(left_count) * gini(left_pos, left_count) +
                 static_cast<double>(right_count) * gini(right_pos, right_count)) /
                static_cast<double>(size);
            double decrease = (static_cast<double>(size) / static_cast<double>(n)) *
                              (parent_gini - child_gini);
            if (decrease > best_decrease) {
                best_decrease = decrease;
                best_feature = f;
                best_cut = cut;
            }
        }

        if (best_feature == d) continue;  // every candidate was constant

        // Partition indices in place around the winning cut.
        std::size_t mid = node.begin;
        std::size_t left_pos = 0;
        for (std::size_t i = node.begin; i < node.end; ++i) {
            if (X.at(indices[i], best_feature) <= best_cut) {
                left_pos += y[indices[i]] == 1;
                std::swap(indices[i], indices[mid]);
                ++mid;
            }
        }

        importance[best_feature] += best_decrease;
        stack.push_back({node.begin, mid, left_pos});
        stack.push_back({mid, node.end, node.positives - left_pos});
    }
}

} // namespace

ImportanceReport fit_importance(const FeatureMatrix& X, const LabelVector& y,
                                const ExtraTreesConfig& config) {
    if (X.rows != y.size())
        fail("E_ARGS", "feature matrix has " + std::to_string(X.rows) + " rows but " +
                           std::to_string(y.size()) + " labels");
    if (X.rows < 2) fail("E_ARGS", "need at least 2 rows to score importance");
    for (int label : y)
        if (label != 0 && label != 1) fail("E_ARGS", "labels must be binary");
    if (config.tree_count < 1) fail("E_CONFIG", "tree_count must be >= 1");

    const std::size_t d = X.cols();
    const int trees = config.tree_count;
    std::vector<std::vector<double>> per_tree(trees, std::vector<double>(d, 0.0));

    unsigned hw = std::thread::hardware_concurrency();
    int threads = config.threads > 0 ? config.threads : static_cast<int>(hw ? hw : 1);
    threads = std::min<int>(threads, trees);

    // Per-tree RNG streams derived from (seed, tree index): the result is
    // identical no matter how trees land on threads.
    auto worker = [&](int first, int step) {
        for (int t = first; t < trees; t += step)
            grow_tree(X, y, config, derive_seed(config.seed, static_cast<std::uint64_t>(t)),
                      per_tree[t]);
    };
    if (threads <= 1) {
        worker(0, 1);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < threads; ++w) pool.emplace_back(worker, w, threads);
        for (auto& th : pool) th.join();
    }

    // Reduce in ascending tree order.
    std::vector<double> totals(d, 0.0);
    for (int t = 0; t < trees; ++t)
        for (std::size_t f = 0; f < d; ++f) totals[f] += per_tree[t][f];

    double sum = 0.0;
    for (double v : totals) sum += v;

    ImportanceReport report;
    report.tree_count = trees;
    report.seed = config.seed;
    report.degenerate = sum <= 0.0;
    for (std::size_t f = 0; f < d; ++f)
        report.scores[X.columns[f]] = report.degenerate ? 0.0 : totals[f] / sum;
    return report;
}

FeatureSelection select_top_k(const ImportanceReport& report, int k) {
    if (k < 1 || static_cast<std::size_t>(k) > report.scores.size())
        fail("E_ARGS", "k = " + std::to_string(k) + " out of range [1, " +
                           std::to_string(report.scores.size()) + "]");
    std::vector<std::pair<std::string, double>> ranked(report.scores.begin(),
                                                       report.scores.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    FeatureSelection selection;
    selection.k = k;
    for (int i = 0; i < k; ++i) selection.kept.push_back(ranked[i].first);
    return selection;
}

std::string selection_to_kv_text(const FeatureSelection& selection) {
    KvDoc doc;
    doc.set("k", static_cast<long long>(selection.k));
    for (std::size_t i = 0; i < selection.kept.size(); ++i)
        doc.set("kept." + std::to_string(i), selection.kept[i]);
    return doc.dump();
}

FeatureSelection selection_from_kv_text(const std::string& text) {
    KvDoc doc = KvDoc::parse(text);
    FeatureSelection selection;
    selection.k = static_cast<int>(parse_int(doc.get("k"), "selection k"));
    for (int i = 0; i < selection.k; ++i)
        selection.kept.push_back(doc.get("kept." + std::to_string(i)));
    return selection;
}

void write_importance_csv(const std::string& path, const ImportanceReport& report) {
    std::vector<std::pair<std::string, double>> ranked(report.scores.begin(),
                                                       report.scores.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    std::ofstream out(path, std::ios::binary);
    if (!out) fail("E_IO", "cannot write '" + path + "'");
    out << "feature,score\n";
    for (const auto& [name, score] : ranked) out << name << "," << format_double(score) << "\n";
    if (!out) fail("E_IO", "write failed for '" + path + "'");
}

} // namespace nids
