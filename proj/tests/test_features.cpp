#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "helpers.hpp"
#include "nids/errors.hpp"
#include "nids/importance.hpp"
#include "nids/scaler.hpp"

using namespace nids;

namespace {

FeatureMatrix column_matrix(const std::string& name, const std::vector<double>& values) {
    auto X = FeatureMatrix::zeros({name}, values.size());
    for (std::size_t r = 0; r < values.size(); ++r) X.at(r, 0) = values[r];
    return X;
}

} // namespace

TEST_CASE("planted predictive column wins the importance ranking") {
    auto [X, y] = testutil::planted_dataset(500, 5, /*planted=*/2, /*seed=*/11);

    // Oracle: exhaustive single-split search confirms the planted column is
    // the only one whose best split is decisively better than the rest, and
    // any split that reaches pure children must use it.
    auto best = testutil::best_split_decrease_per_feature(X, y);
    for (std::size_t f = 0; f < best.size(); ++f) {
        if (f == 2) continue;
        CHECK(best[2] > best[f] + 0.2);
    }

    ExtraTreesConfig config;
    config.tree_count = 100;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        config.seed = seed;
        auto report = fit_importance(X, y, config);
        std::string argmax;
        double top = -1.0;
        double sum = 0.0;
        for (const auto& [name, score] : report.scores) {
            sum += score;
            CHECK(score >= 0.0);
            if (score > top) {
                top = score;
                argmax = name;
            }
        }
        CHECK(argmax == "c02");
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("constant column scores exactly zero") {
    auto [X, y] = testutil::planted_dataset(200, 4, /*planted=*/0, /*seed=*/3);
    for (std::size_t r = 0; r < X.rows; ++r) X.at(r, 3) = 7.5;  // constant
    auto report = fit_importance(X, y, {});
    CHECK(report.scores.at("c03") == 0.0);
    CHECK(report.scores.at("c00") > 0.5);
}

TEST_CASE("duplicated predictive column shares the single-copy score") {
    const std::size_t rows = 400;
    auto [X1, y] = testutil::planted_dataset(rows, 4, /*planted=*/0, /*seed=*/21);

    // same data plus an exact duplicate of the planted column
    std::vector<std::string> names2 = {"c00", "c00dup", "c01", "c02", "c03"};
    auto X2 = FeatureMatrix::zeros(names2, rows);
    for (std::size_t r = 0; r < rows; ++r) {
        X2.at(r, 0) = X1.at(r, 0);
        X2.at(r, 1) = X1.at(r, 0);
        for (std::size_t c = 1; c < 4; ++c) X2.at(r, c + 1) = X1.at(r, c);
    }

    double single = 0.0, pair_sum = 0.0, copy_a = 0.0, copy_b = 0.0;
    ExtraTreesConfig config;
    config.tree_count = 100;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        config.seed = seed;
        single += fit_importance(X1, y, config).scores.at("c00");
        auto scores = fit_importance(X2, y, config).scores;
        copy_a += scores.at("c00");
        copy_b += scores.at("c00dup");
    }
    single /= 10;
    copy_a /= 10;
    copy_b /= 10;
    pair_sum = copy_a + copy_b;
    CHECK(std::abs(pair_sum - single) <= 0.05);
    // split roughly evenly between the identical copies
    CHECK(std::min(copy_a, copy_b) / std::max(copy_a, copy_b) > 0.5);
}

TEST_CASE("argmax importance is invariant under positive column scaling") {
    auto [X, y] = testutil::planted_dataset(300, 5, /*planted=*/1, /*seed=*/17);
    ExtraTreesConfig config;
    config.tree_count = 50;

    auto argmax_of = [](const ImportanceReport& report) {
        std::string best;
        double top = -1.0;
        for (const auto& [name, score] : report.scores)
            if (score > top) {
                top = score;
                best = name;
            }
        return best;
    };

    auto X_scaled = X;
    for (std::size_t r = 0; r < X.rows; ++r) X_scaled.at(r, 3) *= 1000.0;

    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        config.seed = seed;
        CHECK(argmax_of(fit_importance(X, y, config)) == "c01");
        CHECK(argmax_of(fit_importance(X_scaled, y, config)) == "c01");
    }
}

TEST_CASE("importance is identical across thread counts") {
    auto [X, y] = testutil::planted_dataset(300, 6, /*planted=*/4, /*seed=*/29);
    ExtraTreesConfig config;
    config.tree_count = 40;
    config.threads = 1;
    auto sequential = fit_importance(X, y, config);
    config.threads = 4;
    auto parallel = fit_importance(X, y, config);
    CHECK(sequential.scores == parallel.scores);
}

TEST_CASE("degenerate inputs are flagged, not fatal") {
    auto X = FeatureMatrix::zeros({"a", "b"}, 10);
    LabelVector y(10);
    for (std::size_t i = 0; i < 10; ++i) y[i] = i % 2;

    SUBCASE("all-constant matrix") {
        auto report = fit_importance(X, y, {});
        CHECK(report.degenerate);
        CHECK(report.scores.at("a") == 0.0);
        CHECK(report.scores.at("b") == 0.0);
    }
    SUBCASE("single-class labels") {
        auto rng = make_rng(1);
        for (std::size_t r = 0; r < X.rows; ++r) X.at(r, 0) = unit(rng);
        auto report = fit_importance(X, LabelVector(10, 1), {});
        CHECK(report.degenerate);
    }
}

TEST_CASE("fit_importance argument validation") {
    auto X = FeatureMatrix::zeros({"a"}, 1);
    CHECK_THROWS_AS(fit_importance(X, LabelVector{0}, {}), Error);  // < 2 rows
    auto X2 = FeatureMatrix::zeros({"a"}, 4);
    CHECK_THROWS_AS(fit_importance(X2, LabelVector{0, 1}, {}), Error);  // length mismatch
    CHECK_THROWS_AS(fit_importance(X2, LabelVector{0, 1, 2, 0}, {}), Error);  // non-binary
}

TEST_CASE("select_top_k orders by score then name") {
    ImportanceReport report;
    report.scores = {{"a", 0.5}, {"b", 0.3}, {"c", 0.2}};
    auto top2 = select_top_k(report, 2);
    CHECK(top2.kept == std::vector<std::string>{"a", "b"});

    report.scores = {{"a", 0.4}, {"b", 0.4}, {"c", 0.2}};
    CHECK(select_top_k(report, 1).kept == std::vector<std::string>{"a"});

    auto all = select_top_k(report, 3);
    CHECK(all.kept == std::vector<std::string>{"a", "b", "c"});

    CHECK_THROWS_AS(select_top_k(report, 0), Error);
    CHECK_THROWS_AS(select_top_k(report, 4), Error);
}

TEST_CASE("fit_scaler records per-column min and max over training rows") {
    auto X = column_matrix("v", {2, 4, 6});
    FeatureSelection sel{{"v"}, 1};
    auto params = fit_scaler(X, sel);
    CHECK(params.ranges.at("v").min == 2.0);
    CHECK(params.ranges.at("v").max == 6.0);

    auto constant = fit_scaler(column_matrix("v", {5, 5}), sel);
    CHECK(constant.ranges.at("v").min == 5.0);
    CHECK(constant.ranges.at("v").max == 5.0);

    auto single = fit_scaler(column_matrix("v", {3.25}), sel);
    CHECK(single.ranges.at("v").min == 3.25);
    CHECK(single.ranges.at("v").max == 3.25);
}

TEST_CASE("transform rescales, clamps, and zeroes constant columns") {
    FeatureSelection sel{{"v"}, 1};
    ScalerParams params;
    params.ranges["v"] = {2.0, 6.0};

    auto X = column_matrix("v", {2, 4, 6});
    auto T = transform(X, sel, params);
    CHECK(T.at(0, 0) == 0.0);
    CHECK(T.at(1, 0) == 0.5);
    CHECK(T.at(2, 0) == 1.0);

    auto clamped = transform(column_matrix("v", {10}), sel, params);
    CHECK(clamped.at(0, 0) == 1.0);
    auto low = transform(column_matrix("v", {-3}), sel, params);
    CHECK(low.at(0, 0) == 0.0);

    auto unclamped = transform(column_matrix("v", {10}), sel, params, /*clamp=*/false);
    CHECK(unclamped.at(0, 0) == 2.0);

    ScalerParams constant;
    constant.ranges["v"] = {5.0, 5.0};
    CHECK(transform(column_matrix("v", {123.0}), sel, constant).at(0, 0) == 0.0);
}

TEST_CASE("transform of the fitting data spans [0,1] and preserves order") {
    auto rng = make_rng(31);
    auto X = FeatureMatrix::zeros({"a", "b"}, 64);
    for (std::size_t r = 0; r < X.rows; ++r) {
        X.at(r, 0) = 100.0 * unit(rng) - 50.0;
        X.at(r, 1) = 1e-3 * unit(rng);
    }
    FeatureSelection sel{{"a", "b"}, 2};
    auto params = fit_scaler(X, sel);
    auto T = transform(X, sel, params);

    for (std::size_t c = 0; c < 2; ++c) {
        double lo = 2.0, hi = -1.0;
        for (std::size_t r = 0; r < T.rows; ++r) {
            CHECK(T.at(r, c) >= 0.0);
            CHECK(T.at(r, c) <= 1.0);
            lo = std::min(lo, T.at(r, c));
            hi = std::max(hi, T.at(r, c));
        }
        CHECK(lo == 0.0);
        CHECK(hi == 1.0);
        // strictly increasing map: ordering of any two cells is preserved
        for (std::size_t r = 1; r < T.rows; ++r) {
            bool raw_less = X.at(r - 1, c) < X.at(r, c);
            bool scaled_less = T.at(r - 1, c) < T.at(r, c);
            CHECK(raw_less == scaled_less);
        }
    }
}

TEST_CASE("transform reorders columns to the selection order") {
    auto X = FeatureMatrix::zeros({"a", "b", "c"}, 1);
    X.at(0, 0) = 1.0;
    X.at(0, 1) = 2.0;
    X.at(0, 2) = 3.0;
    FeatureSelection sel{{"c", "a"}, 2};
    ScalerParams params;
    params.ranges["a"] = {0.0, 10.0};
    params.ranges["c"] = {0.0, 10.0};
    auto T = transform(X, sel, params);
    CHECK(T.columns == std::vector<std::string>{"c", "a"});
    CHECK(T.at(0, 0) == 0.3);
    CHECK(T.at(0, 1) == 0.1);
}

TEST_CASE("transform fails on a missing column") {
    FeatureSelection sel{{"missing"}, 1};
    ScalerParams params;
    params.ranges["missing"] = {0.0, 1.0};
    auto X = column_matrix("v", {1.0});
    CHECK_THROWS_AS(transform(X, sel, params), Error);
}

TEST_CASE("selection and scaler kv files round-trip") {
    FeatureSelection sel{{"sttl", "sload", "dbytes"}, 3};
    CHECK(selection_from_kv_text(selection_to_kv_text(sel)) == sel);

    ScalerParams params;
    params.ranges["sttl"] = {0.0, 254.0};
    params.ranges["sload"] = {1.25e-9, 5.75e9};
    CHECK(scaler_from_kv_text(scaler_to_kv_text(params)) == params);
}
