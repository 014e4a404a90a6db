#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace nids {

// Column roles in a flow-record CSV. `id` columns are carried through
// ingestion and written back out, but never enter the feature matrix.
enum class ColumnKind { numeric, categorical, id, label, attack_cat };

std::string to_string(ColumnKind kind);
ColumnKind column_kind_from_string(const std::string& text);

struct Column {
    std::string name;
    ColumnKind kind;
};

// Ordered column layout of the input CSVs. Shipped as a versioned text
// manifest (data/unsw_nb15_schema.txt) and treated as the single source of
// truth for what each column means.
class ColumnSchema {
public:
    ColumnSchema() = default;
    explicit ColumnSchema(std::vector<Column> columns);

    static ColumnSchema load_manifest(const std::string& path);
    void save_manifest(const std::string& path) const;

    static ColumnSchema parse_manifest_text(const std::string& text);
    std::string manifest_text() const;

    const std::vector<Column>& columns() const { return columns_; }
    std::size_t size() const { return columns_.size(); }

    // Ordered names of columns that enter the feature matrix
    // (kind numeric or categorical).
    std::vector<std::string> feature_names() const;
    std::vector<std::size_t> feature_indices() const;
    std::vector<std::string> categorical_names() const;

    bool has_column(const std::string& name) const;
    std::size_t index_of(const std::string& name) const;

    std::size_t label_index() const { return label_index_; }
    // npos when the schema carries no attack-category column.
    std::size_t attack_cat_index() const { return attack_cat_index_; }

    int version() const { return version_; }
    void set_version(int v) { version_ = v; }

    bool operator==(const ColumnSchema& other) const;

private:
    void index();

    std::vector<Column> columns_;
    std::size_t label_index_ = static_cast<std::size_t>(-1);
    std::size_t attack_cat_index_ = static_cast<std::size_t>(-1);
    int version_ = 1;
};

// The 45-column layout of the UNSW-NB15 partition CSVs.
ColumnSchema unsw_nb15_partition_schema();

} // namespace nids
