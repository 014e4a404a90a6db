#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>
#include <sstream>

#include "helpers.hpp"
#include "nids/dataset.hpp"
#include "nids/errors.hpp"

using namespace nids;

namespace {

ColumnSchema mixed_schema() {
    return ColumnSchema({{"id", ColumnKind::id},
                         {"dur", ColumnKind::numeric},
                         {"proto", ColumnKind::categorical},
                         {"sbytes", ColumnKind::numeric},
                         {"attack_cat", ColumnKind::attack_cat},
                         {"label", ColumnKind::label}});
}

std::vector<FlowRecord> load_from_text(const std::string& text, const ColumnSchema& schema) {
    std::istringstream in(text);
    return load_csv(in, schema, "<memory>");
}

} // namespace

TEST_CASE("load_csv parses rows in order and extracts labels") {
    auto records = load_from_text(
        "id,dur,proto,sbytes,attack_cat,label\n"
        "1,0.5,tcp,100,Generic,1\n"
        "2,1.25,udp,2048,,0\n",
        mixed_schema());
    REQUIRE(records.size() == 2);
    CHECK(records[0].label == 1);
    CHECK(records[0].attack_cat == "Generic");
    CHECK(records[0].numeric == std::vector<double>{1.0, 0.5, 100.0});
    CHECK(records[0].text == std::vector<std::string>{"tcp"});
    CHECK(records[1].label == 0);
    CHECK(records[1].attack_cat.empty());
}

TEST_CASE("load_csv on a header-only file gives an empty list") {
    auto records = load_from_text("id,dur,proto,sbytes,attack_cat,label\n", mixed_schema());
    CHECK(records.empty());
}

TEST_CASE("load_csv rejects a label outside {0,1} naming the row") {
    std::string text =
        "id,dur,proto,sbytes,attack_cat,label\n"
        "1,0.5,tcp,100,Generic,1\n"
        "2,1.0,udp,5,Generic,2\n";
    CHECK_THROWS_WITH_AS(load_from_text(text, mixed_schema()),
                         doctest::Contains("data row 2"), Error);
}

TEST_CASE("load_csv names the first mismatching header column") {
    std::string text = "id,dur,Protocol,sbytes,attack_cat,label\n";
    try {
        load_from_text(text, mixed_schema());
        FAIL("expected a header error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("proto") != std::string::npos);
        CHECK(std::string(e.what()).find("column 2") != std::string::npos);
    }
}

TEST_CASE("load_csv rejects an unparseable numeric cell naming row and column") {
    std::string text =
        "id,dur,proto,sbytes,attack_cat,label\n"
        "1,abc,tcp,100,Generic,1\n";
    try {
        load_from_text(text, mixed_schema());
        FAIL("expected a parse error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("dur") != std::string::npos);
        CHECK(std::string(e.what()).find("row 1") != std::string::npos);
    }
}

TEST_CASE("load_csv enforces the attack_cat/label invariant") {
    CHECK_THROWS_AS(load_from_text("id,dur,proto,sbytes,attack_cat,label\n"
                                   "1,1,tcp,1,,1\n",
                                   mixed_schema()),
                    Error);
    CHECK_THROWS_AS(load_from_text("id,dur,proto,sbytes,attack_cat,label\n"
                                   "1,1,tcp,1,DoS,0\n",
                                   mixed_schema()),
                    Error);
    // "Normal" and "-" are the raw spellings of "no attack"
    auto ok = load_from_text(
        "id,dur,proto,sbytes,attack_cat,label\n"
        "1,1,tcp,1,Normal,0\n"
        "2,1,tcp,1,-,0\n",
        mixed_schema());
    CHECK(ok.size() == 2);
    CHECK(ok[0].attack_cat.empty());
}

TEST_CASE("load_csv of missing file fails with E_IO") {
    try {
        load_csv("/nonexistent/path.csv", mixed_schema());
        FAIL("expected E_IO");
    } catch (const Error& e) {
        CHECK(e.code() == "E_IO");
    }
}

TEST_CASE("write_csv then load_csv is the identity at full float precision") {
    auto schema = mixed_schema();
    std::vector<FlowRecord> records;
    auto rng = make_rng(99);
    for (int i = 0; i < 200; ++i) {
        FlowRecord rec;
        double v = (unit(rng) - 0.5) * std::pow(10.0, static_cast<int>(bounded(rng, 20)) - 8);
        rec.numeric = {static_cast<double>(i), v, std::floor(unit(rng) * 1e6)};
        // categorical values stress RFC-4180 quoting
        static const std::string protos[] = {"tcp", "udp", "a,b", "x\"y", "line\nbreak", "-"};
        rec.text = {protos[bounded(rng, 6)]};
        rec.label = static_cast<int>(bounded(rng, 2));
        if (rec.label) rec.attack_cat = "Exploits";
        records.push_back(rec);
    }
    std::ostringstream out;
    write_csv(out, schema, records);
    auto loaded = load_from_text(out.str(), schema);
    CHECK(loaded == records);
}

TEST_CASE("fit_encoding assigns lexicographic codes") {
    auto schema = mixed_schema();
    std::vector<FlowRecord> records;
    for (const char* p : {"tcp", "udp", "icmp", "udp"}) {
        FlowRecord rec;
        rec.numeric = {0, 0, 0};
        rec.text = {p};
        records.push_back(rec);
    }
    auto enc = fit_encoding(records, schema, {"proto"});
    CHECK(enc.code("proto", "icmp") == 0);
    CHECK(enc.code("proto", "tcp") == 1);
    CHECK(enc.code("proto", "udp") == 2);
    // unseen at apply time maps to the reserved code = map size
    CHECK(enc.code("proto", "sctp") == 3);
}

TEST_CASE("fit_encoding of a single distinct value gives code 0") {
    auto schema = mixed_schema();
    FlowRecord rec;
    rec.numeric = {0, 0, 0};
    rec.text = {"-"};
    auto enc = fit_encoding({rec}, schema, {"proto"});
    CHECK(enc.code("proto", "-") == 0);
}

TEST_CASE("fit_encoding is independent of row order") {
    auto schema = mixed_schema();
    std::vector<FlowRecord> records;
    for (const char* p : {"udp", "arp", "tcp", "gre", "icmp"}) {
        FlowRecord rec;
        rec.numeric = {0, 0, 0};
        rec.text = {p};
        records.push_back(rec);
    }
    auto forward = fit_encoding(records, schema, {"proto"});
    std::reverse(records.begin(), records.end());
    auto reversed = fit_encoding(records, schema, {"proto"});
    CHECK(forward == reversed);
}

TEST_CASE("fit_encoding rejects a column that is not in the schema") {
    CHECK_THROWS_AS(fit_encoding({}, mixed_schema(), {"nope"}), Error);
}

TEST_CASE("to_matrix shapes, codes and labels") {
    auto schema = mixed_schema();
    std::vector<FlowRecord> records;
    for (int i = 0; i < 3; ++i) {
        FlowRecord rec;
        rec.numeric = {static_cast<double>(i), 0.25 * i, 10.0 * i};
        rec.text = {i == 2 ? "udp" : "icmp"};
        records.push_back(rec);
    }
    auto enc_records = records;
    enc_records[0].text = {"icmp"};
    enc_records[1].text = {"tcp"};
    enc_records[2].text = {"udp"};
    auto enc = fit_encoding(enc_records, schema, {"proto"});
    auto [X, y] = to_matrix(records, schema, enc);

    // id excluded: dur, proto, sbytes remain
    CHECK(X.columns == std::vector<std::string>{"dur", "proto", "sbytes"});
    CHECK(X.rows == 3);
    CHECK(y == LabelVector{0, 0, 0});
    CHECK(X.at(2, 1) == 2.0);  // "udp" under the lexicographic map
    CHECK(X.at(1, 0) == 0.25);
}

TEST_CASE("to_matrix of 47 feature columns keeps the shape") {
    auto schema = testutil::numeric_schema(47);
    std::vector<FlowRecord> records;
    for (int i = 0; i < 3; ++i)
        records.push_back(testutil::numeric_record(std::vector<double>(47, i), 0));
    auto [X, y] = to_matrix(records, schema, EncodingMap{});
    CHECK(X.rows == 3);
    CHECK(X.cols() == 47);
    CHECK(y.size() == 3);
}

TEST_CASE("split_sizes reproduces the published partition counts") {
    auto sizes = split_sizes(257673, {0.6, 0.2, 0.2});
    CHECK(sizes[0] == 154603);
    CHECK(sizes[1] == 51535);
    CHECK(sizes[2] == 51535);
}

TEST_CASE("split of 10 records is 6/2/2, disjoint, union = input") {
    auto records = testutil::label_records(10, 4);
    for (std::size_t i = 0; i < records.size(); ++i)
        records[i].numeric = {static_cast<double>(i)};
    SplitSpec spec;
    CHECK(records[0].label == 1);

    auto parts = split(records, spec);
    CHECK(parts.train.size() == 6);
    CHECK(parts.val.size() == 2);
    CHECK(parts.test.size() == 2);

    std::multiset<double> seen;
    for (const auto* part : {&parts.train, &parts.val, &parts.test})
        for (const auto& rec : *part) seen.insert(rec.numeric[0]);
    CHECK(seen.size() == 10);
    std::multiset<double> expected;
    for (int i = 0; i < 10; ++i) expected.insert(i);
    CHECK(seen == expected);
}

TEST_CASE("split with the same seed is identical; a different seed is not") {
    auto records = testutil::label_records(64, 20);
    for (std::size_t i = 0; i < records.size(); ++i)
        records[i].numeric = {static_cast<double>(i)};
    SplitSpec spec;
    spec.seed = 7;
    auto a = split(records, spec);
    auto b = split(records, spec);
    CHECK(a.train == b.train);
    CHECK(a.val == b.val);
    CHECK(a.test == b.test);

    spec.seed = 8;
    auto c = split(records, spec);
    CHECK(a.train != c.train);
}

TEST_CASE("split partition property over random inputs") {
    auto rng = make_rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        std::size_t n = 3 + bounded(rng, 200);
        std::size_t pos = bounded(rng, n + 1);
        auto records = testutil::label_records(n, pos);
        for (std::size_t i = 0; i < records.size(); ++i)
            records[i].numeric = {static_cast<double>(i)};

        SplitSpec spec;
        spec.seed = rng();
        spec.stratify = trial % 2 == 0;
        double r1 = 0.3 + 0.5 * unit(rng);
        double r2 = (1.0 - r1) * (0.2 + 0.6 * unit(rng));
        spec.ratios = {r1, r2, 1.0 - r1 - r2};

        auto parts = split(records, spec);
        CHECK(parts.train.size() + parts.val.size() + parts.test.size() == n);
        std::set<double> seen;
        for (const auto* part : {&parts.train, &parts.val, &parts.test})
            for (const auto& rec : *part) seen.insert(rec.numeric[0]);
        CHECK(seen.size() == n);  // disjoint and exhaustive
    }
}

TEST_CASE("stratified split matches class proportions within one record") {
    auto records = testutil::label_records(1003, 117);
    SplitSpec spec;
    spec.stratify = true;
    auto parts = split(records, spec);
    auto sizes = split_sizes(records.size(), spec.ratios);

    auto positives = [](const std::vector<FlowRecord>& part) {
        std::size_t p = 0;
        for (const auto& rec : part) p += rec.label;
        return p;
    };
    double frac = 117.0 / 1003.0;
    CHECK(std::abs(static_cast<double>(positives(parts.train)) - frac * sizes[0]) <= 1.0);
    CHECK(std::abs(static_cast<double>(positives(parts.val)) - frac * sizes[1]) <= 1.0);
    CHECK(std::abs(static_cast<double>(positives(parts.test)) - frac * sizes[2]) <= 1.0);
}

TEST_CASE("stratified split needs at least 3 records") {
    auto records = testutil::label_records(2, 1);
    SplitSpec spec;
    CHECK_THROWS_AS(split(records, spec), Error);
}

TEST_CASE("split rejects bad ratios") {
    SplitSpec spec;
    spec.ratios = {0.5, 0.3, 0.3};
    CHECK_THROWS_AS(split(testutil::label_records(10, 5), spec), Error);
    spec.ratios = {1.0, 0.0, 0.0};
    CHECK_THROWS_AS(split(testutil::label_records(10, 5), spec), Error);
}

TEST_CASE("encoding json sidecar round-trips") {
    auto schema = mixed_schema();
    std::vector<FlowRecord> records;
    for (const char* p : {"tcp", "udp"}) {
        FlowRecord rec;
        rec.numeric = {0, 0, 0};
        rec.text = {p};
        records.push_back(rec);
    }
    auto enc = fit_encoding(records, schema, {"proto"});
    auto round = encoding_from_json_text(encoding_to_json_text(enc));
    CHECK(round == enc);
}
