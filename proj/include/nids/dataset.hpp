#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "nids/flow.hpp"
#include "nids/matrix.hpp"
#include "nids/schema.hpp"

namespace nids {

std::vector<FlowRecord> load_csv(const std::string& path, const ColumnSchema& schema);
std::vector<FlowRecord> load_csv(std::istream& in, const ColumnSchema& schema,
                                 const std::string& source_name);

void write_csv(const std::string& path, const ColumnSchema& schema,
               const std::vector<FlowRecord>& records);
void write_csv(std::ostream& out, const ColumnSchema& schema,
               const std::vector<FlowRecord>& records);

// Per-column mapping from categorical string to integer code. Codes are
// contiguous from 0 in lexicographic value order, so fitting is independent
// of row order. A value unseen at fit time maps to the reserved code
// equal to the column's map size.
class EncodingMap {
public:
    EncodingMap() = default;
    explicit EncodingMap(std::map<std::string, std::map<std::string, int>> codes)
        : codes_(std::move(codes)) {}

    int code(const std::string& column, const std::string& value) const;
    bool has_column(const std::string& column) const { return codes_.count(column) != 0; }

    const std::map<std::string, std::map<std::string, int>>& columns() const { return codes_; }

    bool operator==(const EncodingMap&) const = default;

private:
    std::map<std::string, std::map<std::string, int>> codes_;
};

EncodingMap fit_encoding(const std::vector<FlowRecord>& records, const ColumnSchema& schema,
                         const std::vector<std::string>& categorical_columns);

// EncodingMap sidecar (JSON text, deterministic key order).
std::string encoding_to_json_text(const EncodingMap& encoding);
EncodingMap encoding_from_json_text(const std::string& text);

// Encodes every feature column (categoricals replaced by codes) into a
// dense matrix; labels in row order.
std::pair<FeatureMatrix, LabelVector> to_matrix(const std::vector<FlowRecord>& records,
                                                const ColumnSchema& schema,
                                                const EncodingMap& encoding);

struct SplitSpec {
    std::array<double, 3> ratios{0.6, 0.2, 0.2};  // train, val, test
    std::uint64_t seed = 42;
    bool stratify = true;

    void validate() const;
};

struct SplitResult {
    std::vector<FlowRecord> train;
    std::vector<FlowRecord> val;
    std::vector<FlowRecord> test;
};

// Deterministic sizes for an n-row split: boundaries at floor(n*r_train)
// and floor(n*(r_train+r_val)); the test set takes the tail. 257,673 rows
// at (0.6, 0.2, 0.2) come out as 154,603 / 51,535 / 51,535.
std::array<std::size_t, 3> split_sizes(std::size_t n, const std::array<double, 3>& ratios);

SplitResult split(const std::vector<FlowRecord>& records, const SplitSpec& spec);

} // namespace nids
