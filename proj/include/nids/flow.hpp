#pragma once

#include <string>
#include <vector>

#include "nids/schema.hpp"

namespace nids {

// One ingested flow row. Numeric and id fields live in `numeric`,
// categorical fields in `text`, each in schema order of their kind; the
// label and attack category are pulled out of the row at ingest.
struct FlowRecord {
    std::vector<double> numeric;
    std::vector<std::string> text;
    int label = 0;                // 0 = normal, 1 = attack
    std::string attack_cat;       // empty iff label == 0

    bool operator==(const FlowRecord&) const = default;
};

// Maps schema column positions onto FlowRecord storage slots.
class RecordLayout {
public:
    explicit RecordLayout(const ColumnSchema& schema);

    std::size_t numeric_count() const { return numeric_count_; }
    std::size_t text_count() const { return text_count_; }

    // Slot of column `col` inside FlowRecord::numeric (numeric/id columns)
    // or FlowRecord::text (categorical columns).
    std::size_t slot(std::size_t col) const { return slots_[col]; }

private:
    std::vector<std::size_t> slots_;
    std::size_t numeric_count_ = 0;
    std::size_t text_count_ = 0;
};

} // namespace nids
