#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "helpers.hpp"
#include "nids/benchmark.hpp"
#include "nids/engine.hpp"
#include "nids/metrics.hpp"
#include "nids/train.hpp"

using namespace nids;

TEST_CASE("confusion counts a hand fixture") {
    auto cm = confusion({1, 1, 0, 0}, {1, 0, 0, 1});
    CHECK(cm.tp == 1);
    CHECK(cm.fn == 1);
    CHECK(cm.tn == 1);
    CHECK(cm.fp == 1);
    CHECK(cm.total() == 4);
}

TEST_CASE("perfect predictions have zero off-diagonal counts") {
    std::vector<int> labels{1, 0, 1, 1, 0};
    auto cm = confusion(labels, labels);
    CHECK(cm.fp == 0);
    CHECK(cm.fn == 0);
    CHECK(cm.tp == 3);
    CHECK(cm.tn == 2);
}

TEST_CASE("empty inputs give an all-zero matrix") {
    auto cm = confusion({}, {});
    CHECK(cm.total() == 0);
}

TEST_CASE("confusion rejects length mismatches and non-binary values") {
    CHECK_THROWS_AS(confusion({1, 0}, {1}), Error);
    CHECK_THROWS_AS(confusion({1, 2}, {1, 0}), Error);
    CHECK_THROWS_AS(confusion({1, 0}, {1, 3}), Error);
}

TEST_CASE("rates from the confusion matrix") {
    ConfusionMatrix cm{8, 0, 0, 2};  // tp fp tn fn
    CHECK(tpr(cm).value == doctest::Approx(0.8));

    ConfusionMatrix ninety{45, 5, 45, 5};
    CHECK(accuracy_pct(ninety).value == doctest::Approx(90.0));

    ConfusionMatrix mixed{10, 3, 287, 2};
    CHECK(fpr(mixed).value == doctest::Approx(3.0 / 290.0));
    CHECK(fnr(mixed).value == doctest::Approx(2.0 / 12.0));

    // degenerate denominators flag instead of erroring
    ConfusionMatrix no_positives{0, 2, 8, 0};
    CHECK(tpr(no_positives).degenerate);
    CHECK(tpr(no_positives).value == 0.0);
    CHECK(accuracy_pct(ConfusionMatrix{}).degenerate);
}

TEST_CASE("accuracy is invariant under swapping the classes") {
    ConfusionMatrix cm{10, 3, 80, 7};
    ConfusionMatrix swapped{cm.tn, cm.fn, cm.tp, cm.fp};
    CHECK(accuracy_pct(cm).value == accuracy_pct(swapped).value);
}

TEST_CASE("roc of perfectly separating scores has AUC 1") {
    std::vector<int> labels{1, 1, 0, 0};
    std::vector<float> scores{0.9f, 0.8f, 0.3f, 0.1f};
    auto curve = roc(labels, scores);
    CHECK(!curve.degenerate);
    CHECK(*auc(curve) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("roc with all-equal scores is the diagonal, AUC one half") {
    std::vector<int> labels{1, 0, 1, 0};
    std::vector<float> scores(4, 0.7f);
    auto curve = roc(labels, scores);
    REQUIRE(curve.points.size() == 2);
    CHECK(curve.points.front().fpr == 0.0);
    CHECK(curve.points.front().tpr == 0.0);
    CHECK(curve.points.back().fpr == 1.0);
    CHECK(curve.points.back().tpr == 1.0);
    CHECK(*auc(curve) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("roc AUC on the mixed fixture is 0.75") {
    std::vector<int> labels{1, 0, 1, 0};
    std::vector<float> scores{0.9f, 0.8f, 0.4f, 0.1f};
    CHECK(*auc(roc(labels, scores)) == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(testutil::mann_whitney_auc(labels, scores) == doctest::Approx(0.75));
}

TEST_CASE("single-class labels give a degenerate curve and undefined AUC") {
    auto curve = roc({1, 1, 1}, {0.1f, 0.5f, 0.9f});
    CHECK(curve.degenerate);
    CHECK(!auc(curve).has_value());
    REQUIRE(curve.points.size() == 2);
    CHECK(curve.points.front().tpr == 0.0);
    CHECK(curve.points.back().tpr == 1.0);
}

TEST_CASE("roc validates inputs") {
    CHECK_THROWS_AS(roc({1, 0}, {0.5f}), Error);
    CHECK_THROWS_AS(roc({1, 0}, {0.5f, 1.5f}), Error);
    CHECK_THROWS_AS(roc({1, 2}, {0.5f, 0.5f}), Error);
}

TEST_CASE("roc monotonicity, endpoints and threshold ordering on random instances") {
    auto rng = make_rng(77);
    for (int trial = 0; trial < 50; ++trial) {
        std::size_t n = 2 + bounded(rng, 300);
        std::vector<int> labels(n);
        std::vector<float> scores(n);
        bool tie_heavy = trial % 2 == 0;
        for (std::size_t i = 0; i < n; ++i) {
            labels[i] = static_cast<int>(bounded(rng, 2));
            double s = unit(rng);
            scores[i] = static_cast<float>(tie_heavy ? std::round(s * 10.0) / 10.0 : s);
        }
        auto curve = roc(labels, scores);
        if (curve.degenerate) continue;

        CHECK(curve.points.front().fpr == 0.0);
        CHECK(curve.points.front().tpr == 0.0);
        CHECK(curve.points.back().fpr == 1.0);
        CHECK(curve.points.back().tpr == 1.0);
        CHECK(std::isinf(curve.points.front().threshold));
        for (std::size_t i = 1; i < curve.points.size(); ++i) {
            CHECK(curve.points[i].fpr >= curve.points[i - 1].fpr);
            CHECK(curve.points[i].tpr >= curve.points[i - 1].tpr);
            CHECK(curve.points[i].threshold < curve.points[i - 1].threshold);
        }
    }
}

TEST_CASE("AUC equals the brute-force Mann-Whitney statistic on 100 random instances") {
    auto rng = make_rng(88);
    for (int trial = 0; trial < 100; ++trial) {
        std::size_t n = 2 + bounded(rng, 499);
        std::vector<int> labels(n);
        std::vector<float> scores(n);
        labels[0] = 1;
        labels[1] = 0;  // both classes present
        for (std::size_t i = 0; i < n; ++i) {
            if (i > 1) labels[i] = static_cast<int>(bounded(rng, 2));
            double s = unit(rng);
            if (trial % 3 == 0) s = std::round(s * 8.0) / 8.0;  // force ties
            scores[i] = static_cast<float>(s);
        }
        auto value = auc(roc(labels, scores));
        REQUIRE(value.has_value());
        double oracle = testutil::mann_whitney_auc(labels, scores);
        CHECK(std::abs(*value - oracle) <= 1e-9);
    }
}

TEST_CASE("evaluate assembles the full report") {
    std::vector<int> labels{1, 1, 1, 0, 0, 0};
    std::vector<float> scores{0.9f, 0.8f, 0.2f, 0.7f, 0.1f, 0.05f};
    auto report = evaluate(labels, scores, 0.5);
    CHECK(report.cm.tp == 2);
    CHECK(report.cm.fn == 1);
    CHECK(report.cm.fp == 1);
    CHECK(report.cm.tn == 2);
    CHECK(report.accuracy.value == doctest::Approx(100.0 * 4 / 6));
    CHECK(report.fnr_rate.value == doctest::Approx(1.0 / 3.0));
    CHECK(report.fpr_rate.value == doctest::Approx(1.0 / 3.0));
    CHECK(report.fp_pct_of_total == doctest::Approx(100.0 / 6.0));
    CHECK(report.auc_value.has_value());

    auto text = report_text(report);
    CHECK(text.find("accuracy:") != std::string::npos);
    CHECK(text.find("FPR (of normals)") != std::string::npos);
    CHECK(text.find("FN  (of all)") != std::string::npos);

    auto json_text = report_json_text(report);
    CHECK(json_text.find("\"accuracy_pct\"") != std::string::npos);
}

TEST_CASE("evaluate with predictions equal to labels reports 100% and 0% FPR") {
    std::vector<int> labels{1, 0, 1, 0};
    std::vector<float> scores{1.0f, 0.0f, 1.0f, 0.0f};
    auto report = evaluate(labels, scores, 0.5);
    CHECK(report.accuracy.value == 100.0);
    CHECK(report.fpr_rate.value == 0.0);
    CHECK(report.fnr_rate.value == 0.0);
}

TEST_CASE("roc csv contains the endpoints") {
    auto curve = roc({1, 0, 1, 0}, {0.9f, 0.8f, 0.4f, 0.1f});
    std::string path = "roc_test_tmp.csv";
    write_roc_csv(path, curve);
    std::ifstream in(path);
    std::string all((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(all.rfind("threshold,fpr,tpr\n", 0) == 0);
    CHECK(all.find("inf,0,0\n") != std::string::npos);
    CHECK(all.find("1,1\n") != std::string::npos);
    std::remove(path.c_str());
}

TEST_CASE("benchmark result is definitionally consistent and outputs are stable") {
    // tiny bundle around an untrained model
    auto schema = testutil::numeric_schema(8);
    auto records = testutil::label_records(64, 32);
    RecordLayout layout(schema);
    auto rng = make_rng(4);
    for (auto& rec : records) {
        rec.numeric.resize(layout.numeric_count());
        for (auto& v : rec.numeric) v = unit(rng);
    }
    auto [X, y] = to_matrix(records, schema, EncodingMap{});
    FeatureSelection sel;
    sel.k = 8;
    sel.kept = X.columns;
    auto scaler = fit_scaler(X, sel);
    Model model = build(Family::cnn_lstm, 8);
    Bundle bundle = make_bundle(model, sel, scaler, EncodingMap{}, schema, true, 42, 64, 64);
    InferenceEngine engine(bundle);

    auto result = run_benchmark(engine, records, 2);
    CHECK(result.record_count == 64);
    CHECK(result.thread_count == 2);
    CHECK(result.wall_seconds > 0.0);
    CHECK(result.records_per_second * result.wall_seconds ==
          doctest::Approx(static_cast<double>(result.record_count)).epsilon(0.001));

    // deterministic predictions across repeated runs, timing free to differ
    auto a = engine.infer(records, 2);
    auto b = engine.infer(records, 2);
    CHECK(a.scores == b.scores);

    CHECK_THROWS_AS(run_benchmark(engine, {}, 1), Error);
    CHECK_THROWS_AS(run_benchmark(engine, records, 0), Error);
}

TEST_CASE("benchmark csv log appends with a single header") {
    std::string path = "bench_log_tmp.csv";
    std::remove(path.c_str());
    BenchmarkResult r;
    r.wall_seconds = 1.5;
    r.records_per_second = 100.0;
    r.thread_count = 2;
    r.record_count = 150;
    append_benchmark_csv(path, "cnn-lstm", "target", r);
    append_benchmark_csv(path, "cnn-lstm", "source", r);
    std::ifstream in(path);
    std::string line;
    std::size_t lines = 0, headers = 0;
    while (std::getline(in, line)) {
        if (line.rfind("model,", 0) == 0) ++headers;
        if (!line.empty()) ++lines;
    }
    CHECK(headers == 1);
    CHECK(lines == 3);
    std::remove(path.c_str());
}
