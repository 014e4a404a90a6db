#include "nids/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>

#include <json.hpp>

#include "nids/csv.hpp"
#include "nids/errors.hpp"
#include "nids/kv.hpp"
#include "nids/rng.hpp"

namespace nids {

namespace {

std::string strip_bom(std::string s) {
    if (s.size() >= 3 && static_cast<unsigned char>(s[0]) == 0xEF &&
        static_cast<unsigned char>(s[1]) == 0xBB && static_cast<unsigned char>(s[2]) == 0xBF)
        s.erase(0, 3);
    return s;
}

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return {};
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

bool iequals(const std::string& a, const char* b) {
    std::size_t n = 0;
    while (b[n]) ++n;
    if (a.size() != n) return false;
    for (std::size_t i = 0; i < n; ++i)
        if (std::tolower(static_cast<unsigned char>(a[i])) != b[i]) return false;
    return true;
}

// The raw files spell "no attack" three ways: empty, "-", and "Normal".
// All collapse to the empty string so the label/category invariant is
// checkable.
std::string canonical_attack_cat(const std::string& raw) {
    std::string t = trim(raw);
    if (t.empty() || t == "-" || iequals(t, "normal")) return {};
    return t;
}

double parse_numeric_cell(const std::string& cell, std::size_t row, const std::string& column) {
    double value = 0.0;
    std::string t = trim(cell);
    const char* first = t.data();
    const char* last = t.data() + t.size();
    auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc() || res.ptr != last || t.empty())
        fail("E_PARSE", "data row " + std::to_string(row) + ", column '" + column +
                            "': unparseable numeric cell '" + cell + "'");
    return value;
}

} // namespace

std::vector<FlowRecord> load_csv(const std::string& path, const ColumnSchema& schema) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("E_IO", "cannot open '" + path + "'");
    return load_csv(in, schema, path);
}

std::vector<FlowRecord> load_csv(std::istream& in, const ColumnSchema& schema,
                                 const std::string& source_name) {
    CsvReader reader(in);
    std::vector<std::string> fields;
    if (!reader.next(fields)) fail("E_PARSE", source_name + ": empty file, expected a header row");

    const auto& cols = schema.columns();
    if (!fields.empty()) fields[0] = strip_bom(fields[0]);
    if (fields.size() != cols.size())
        fail("E_SCHEMA", source_name + ": header has " + std::to_string(fields.size()) +
                             " columns, schema expects " + std::to_string(cols.size()));
    for (std::size_t i = 0; i < cols.size(); ++i) {
        if (trim(fields[i]) != cols[i].name)
            fail("E_SCHEMA", source_name + ": header mismatch at column " + std::to_string(i) +
                                 ": expected '" + cols[i].name + "', got '" + fields[i] + "'");
    }

    RecordLayout layout(schema);
    std::vector<FlowRecord> records;
    std::size_t row = 0;
    while (reader.next(fields)) {
        ++row;
        if (fields.size() != cols.size())
            fail("E_PARSE", source_name + ": data row " + std::to_string(row) + " has " +
                                std::to_string(fields.size()) + " cells, expected " +
                                std::to_string(cols.size()));
        FlowRecord rec;
        rec.numeric.resize(layout.numeric_count());
        rec.text.resize(layout.text_count());
        for (std::size_t i = 0; i < cols.size(); ++i) {
            switch (cols[i].kind) {
                case ColumnKind::numeric:
                case ColumnKind::id:
                    rec.numeric[layout.slot(i)] = parse_numeric_cell(fields[i], row, cols[i].name);
                    break;
                case ColumnKind::categorical:
                    rec.text[layout.slot(i)] = trim(fields[i]);
                    break;
                case ColumnKind::label: {
                    double v = parse_numeric_cell(fields[i], row, cols[i].name);
                    if (v != 0.0 && v != 1.0)
                        fail("E_PARSE", source_name + ": data row " + std::to_string(row) +
                                            ": label '" + fields[i] + "' outside {0,1}");
                    rec.label = static_cast<int>(v);
                    break;
                }
                case ColumnKind::attack_cat:
                    rec.attack_cat = canonical_attack_cat(fields[i]);
                    break;
            }
        }
        bool has_cat = !rec.attack_cat.empty();
        if (has_cat != (rec.label == 1))
            fail("E_PARSE", source_name + ": data row " + std::to_string(row) +
                                ": attack_cat must be non-empty exactly when label is 1");
        records.push_back(std::move(rec));
    }
    return records;
}

void write_csv(const std::string& path, const ColumnSchema& schema,
               const std::vector<FlowRecord>& records) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail("E_IO", "cannot write '" + path + "'");
    write_csv(out, schema, records);
    if (!out) fail("E_IO", "write failed for '" + path + "'");
}

void write_csv(std::ostream& out, const ColumnSchema& schema,
               const std::vector<FlowRecord>& records) {
    CsvWriter writer(out);
    const auto& cols = schema.columns();
    std::vector<std::string> fields(cols.size());
    for (std::size_t i = 0; i < cols.size(); ++i) fields[i] = cols[i].name;
    writer.write_row(fields);

    RecordLayout layout(schema);
    for (const auto& rec : records) {
        for (std::size_t i = 0; i < cols.size(); ++i) {
            switch (cols[i].kind) {
                case ColumnKind::numeric:
                case ColumnKind::id:
                    fields[i] = format_double(rec.numeric[layout.slot(i)]);
                    break;
                case ColumnKind::categorical:
                    fields[i] = rec.text[layout.slot(i)];
                    break;
                case ColumnKind::label:
                    fields[i] = rec.label ? "1" : "0";
                    break;
                case ColumnKind::attack_cat:
                    fields[i] = rec.attack_cat;
                    break;
            }
        }
        writer.write_row(fields);
    }
}

int EncodingMap::code(const std::string& column, const std::string& value) const {
    auto it = codes_.find(column);
    if (it == codes_.end()) fail("E_SCHEMA", "no encoding for column '" + column + "'");
    auto vit = it->second.find(value);
    if (vit == it->second.end()) return static_cast<int>(it->second.size());  // reserved code
    return vit->second;
}

EncodingMap fit_encoding(const std::vector<FlowRecord>& records, const ColumnSchema& schema,
                         const std::vector<std::string>& categorical_columns) {
    RecordLayout layout(schema);
    std::map<std::string, std::map<std::string, int>> codes;
    for (const auto& name : categorical_columns) {
        std::size_t col = schema.index_of(name);
        if (schema.columns()[col].kind != ColumnKind::categorical)
            fail("E_SCHEMA", "column '" + name + "' is not categorical");
        std::set<std::string> distinct;
        for (const auto& rec : records) distinct.insert(rec.text[layout.slot(col)]);
        std::map<std::string, int> column_codes;
        int next = 0;
        for (const auto& value : distinct) column_codes[value] = next++;
        codes[name] = std::move(column_codes);
    }
    return EncodingMap(std::move(codes));
}

std::string encoding_to_json_text(const EncodingMap& encoding) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [column, values] : encoding.columns()) {
        nlohmann::json codes = nlohmann::json::object();
        for (const auto& [value, code] : values) codes[value] = code;
        j[column] = codes;
    }
    return j.dump(2) + "\n";
}

EncodingMap encoding_from_json_text(const std::string& text) {
    std::map<std::string, std::map<std::string, int>> codes;
    try {
        nlohmann::json j = nlohmann::json::parse(text);
        for (const auto& [column, values] : j.items()) {
            std::map<std::string, int>& column_codes = codes[column];
            for (const auto& [value, code] : values.items())
                column_codes[value] = code.get<int>();
        }
    } catch (const nlohmann::json::exception& e) {
        fail("E_PARSE", std::string("malformed encoding file: ") + e.what());
    }
    return EncodingMap(std::move(codes));
}

std::pair<FeatureMatrix, LabelVector> to_matrix(const std::vector<FlowRecord>& records,
                                                const ColumnSchema& schema,
                                                const EncodingMap& encoding) {
    for (const auto& name : schema.categorical_names())
        if (!encoding.has_column(name))
            fail("E_SCHEMA", "encoding does not cover categorical column '" + name + "'");

    RecordLayout layout(schema);
    auto feature_idx = schema.feature_indices();
    FeatureMatrix m = FeatureMatrix::zeros(schema.feature_names(), records.size());
    LabelVector labels(records.size());

    for (std::size_t r = 0; r < records.size(); ++r) {
        const auto& rec = records[r];
        if (rec.numeric.size() != layout.numeric_count() || rec.text.size() != layout.text_count())
            fail("E_SCHEMA", "record " + std::to_string(r) +
                                 " does not match the schema (was it loaded with a different "
                                 "manifest?)");
        for (std::size_t c = 0; c < feature_idx.size(); ++c) {
            std::size_t col = feature_idx[c];
            const Column& column = schema.columns()[col];
            if (column.kind == ColumnKind::numeric)
                m.at(r, c) = rec.numeric[layout.slot(col)];
            else
                m.at(r, c) = static_cast<double>(
                    encoding.code(column.name, rec.text[layout.slot(col)]));
        }
        labels[r] = rec.label;
    }
    return {std::move(m), std::move(labels)};
}

void SplitSpec::validate() const {
    double sum = ratios[0] + ratios[1] + ratios[2];
    if (std::abs(sum - 1.0) > 1e-9) fail("E_CONFIG", "split ratios must sum to 1");
    for (double r : ratios)
        if (r <= 0.0) fail("E_CONFIG", "split ratios must be positive");
}

std::array<std::size_t, 3> split_sizes(std::size_t n, const std::array<double, 3>& ratios) {
    // Boundary quota with a snap for products that are integers up to
    // floating-point noise (10 * 0.6 must give 6, not 5).
    auto quota = [n](double ratio) {
        double x = static_cast<double>(n) * ratio;
        double nearest = std::nearbyint(x);
        if (std::abs(x - nearest) < 1e-6) return static_cast<std::size_t>(nearest);
        return static_cast<std::size_t>(std::floor(x));
    };
    std::size_t b1 = std::min(quota(ratios[0]), n);
    std::size_t b2 = std::min(std::max(quota(ratios[0] + ratios[1]), b1), n);
    return {b1, b2 - b1, n - b2};
}

SplitResult split(const std::vector<FlowRecord>& records, const SplitSpec& spec) {
    spec.validate();
    const std::size_t n = records.size();
    if (spec.stratify && n < 3)
        fail("E_ARGS", "stratified split needs at least 3 records, got " + std::to_string(n));

    auto sizes = split_sizes(n, spec.ratios);

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    auto rng = make_rng(spec.seed);
    fisher_yates(order, rng);

    // Per-record split assignment: 0 train, 1 val, 2 test.
    std::vector<unsigned char> assign(n, 2);
    if (!spec.stratify) {
        for (std::size_t k = 0; k < n; ++k)
            assign[order[k]] = k < sizes[0] ? 0 : (k < sizes[0] + sizes[1] ? 1 : 2);
    } else {
        // Allocate the attack class by cumulative integer floors against the
        // global boundaries, the normal class takes the per-split rest; each
        // class lands within one record of its exact proportion.
        std::uint64_t m1 = 0;
        for (const auto& rec : records) m1 += rec.label == 1;
        std::uint64_t b1 = m1 * sizes[0] / n;
        std::uint64_t b2 = m1 * (sizes[0] + sizes[1]) / n;
        std::array<std::uint64_t, 3> quota1{b1, b2 - b1, m1 - b2};
        std::array<std::uint64_t, 3> quota0{sizes[0] - quota1[0], sizes[1] - quota1[1],
                                            sizes[2] - quota1[2]};
        std::array<std::uint64_t, 3>* quotas[2] = {&quota0, &quota1};
        for (std::size_t k = 0; k < n; ++k) {
            std::size_t idx = order[k];
            auto& q = *quotas[records[idx].label];
            unsigned char s = q[0] > 0 ? 0 : (q[1] > 0 ? 1 : 2);
            --q[s];
            assign[idx] = s;
        }
    }

    SplitResult result;
    result.train.reserve(sizes[0]);
    result.val.reserve(sizes[1]);
    result.test.reserve(sizes[2]);
    // Splits keep the shuffled order.
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t idx = order[k];
        switch (assign[idx]) {
            case 0: result.train.push_back(records[idx]); break;
            case 1: result.val.push_back(records[idx]); break;
            default: result.test.push_back(records[idx]); break;
        }
    }
    return result;
}

} // namespace nids
