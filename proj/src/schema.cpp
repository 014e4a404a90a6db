#include "nids/schema.hpp"

#include <fstream>
#include <sstream>

#include "nids/errors.hpp"
#include "nids/kv.hpp"

namespace nids {

std::string to_string(ColumnKind kind) {
    switch (kind) {
        case ColumnKind::numeric: return "numeric";
        case ColumnKind::categorical: return "categorical";
        case ColumnKind::id: return "id";
        case ColumnKind::label: return "label";
        case ColumnKind::attack_cat: return "attack_cat";
    }
    return "?";
}

ColumnKind column_kind_from_string(const std::string& text) {
    if (text == "numeric") return ColumnKind::numeric;
    if (text == "categorical") return ColumnKind::categorical;
    if (text == "id") return ColumnKind::id;
    if (text == "label") return ColumnKind::label;
    if (text == "attack_cat") return ColumnKind::attack_cat;
    fail("E_SCHEMA", "unknown column kind '" + text + "'");
}

ColumnSchema::ColumnSchema(std::vector<Column> columns) : columns_(std::move(columns)) {
    index();
}

void ColumnSchema::index() {
    label_index_ = attack_cat_index_ = static_cast<std::size_t>(-1);
    for (std::size_t i = 0; i < columns_.size(); ++i) {
        for (std::size_t j = i + 1; j < columns_.size(); ++j)
            if (columns_[i].name == columns_[j].name)
                fail("E_SCHEMA", "duplicate column name '" + columns_[i].name + "'");
        if (columns_[i].kind == ColumnKind::label) {
            if (label_index_ != static_cast<std::size_t>(-1))
                fail("E_SCHEMA", "multiple label columns");
            label_index_ = i;
        }
        if (columns_[i].kind == ColumnKind::attack_cat) {
            if (attack_cat_index_ != static_cast<std::size_t>(-1))
                fail("E_SCHEMA", "multiple attack_cat columns");
            attack_cat_index_ = i;
        }
    }
    if (label_index_ == static_cast<std::size_t>(-1))
        fail("E_SCHEMA", "schema has no label column");
}

std::vector<std::string> ColumnSchema::feature_names() const {
    std::vector<std::string> names;
    for (const auto& c : columns_)
        if (c.kind == ColumnKind::numeric || c.kind == ColumnKind::categorical)
            names.push_back(c.name);
    return names;
}

std::vector<std::size_t> ColumnSchema::feature_indices() const {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < columns_.size(); ++i)
        if (columns_[i].kind == ColumnKind::numeric || columns_[i].kind == ColumnKind::categorical)
            idx.push_back(i);
    return idx;
}

std::vector<std::string> ColumnSchema::categorical_names() const {
    std::vector<std::string> names;
    for (const auto& c : columns_)
        if (c.kind == ColumnKind::categorical) names.push_back(c.name);
    return names;
}

bool ColumnSchema::has_column(const std::string& name) const {
    for (const auto& c : columns_)
        if (c.name == name) return true;
    return false;
}

std::size_t ColumnSchema::index_of(const std::string& name) const {
    for (std::size_t i = 0; i < columns_.size(); ++i)
        if (columns_[i].name == name) return i;
    fail("E_SCHEMA", "no column named '" + name + "'");
}

bool ColumnSchema::operator==(const ColumnSchema& other) const {
    if (columns_.size() != other.columns_.size()) return false;
    for (std::size_t i = 0; i < columns_.size(); ++i)
        if (columns_[i].name != other.columns_[i].name ||
            columns_[i].kind != other.columns_[i].kind)
            return false;
    return true;
}

std::string ColumnSchema::manifest_text() const {
    std::ostringstream out;
    out << "# column manifest: <name> <kind>, kind = numeric|categorical|id|label|attack_cat\n";
    out << "version " << version_ << "\n";
    for (const auto& c : columns_) out << c.name << " " << to_string(c.kind) << "\n";
    return out.str();
}

ColumnSchema ColumnSchema::parse_manifest_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::vector<Column> columns;
    int version = -1;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::size_t start = line.find_first_not_of(" \t");
        if (start == std::string::npos || line[start] == '#') continue;
        std::istringstream fields(line);
        std::string first, second, extra;
        fields >> first >> second;
        if (fields >> extra)
            fail("E_SCHEMA", "manifest line " + std::to_string(lineno) + ": too many tokens");
        if (first == "version") {
            version = static_cast<int>(parse_int(second, "manifest version"));
            continue;
        }
        if (second.empty())
            fail("E_SCHEMA", "manifest line " + std::to_string(lineno) + ": expected '<name> <kind>'");
        columns.push_back({first, column_kind_from_string(second)});
    }
    if (version < 0) fail("E_SCHEMA", "manifest is missing a 'version' line");
    ColumnSchema schema(std::move(columns));
    schema.set_version(version);
    return schema;
}

ColumnSchema ColumnSchema::load_manifest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("E_IO", "cannot read manifest '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_manifest_text(buf.str());
}

void ColumnSchema::save_manifest(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail("E_IO", "cannot write manifest '" + path + "'");
    out << manifest_text();
    if (!out) fail("E_IO", "write failed for '" + path + "'");
}

ColumnSchema unsw_nb15_partition_schema() {
    using K = ColumnKind;
    std::vector<Column> cols = {
        {"id", K::id},
        {"dur", K::numeric},
        {"proto", K::categorical},
        {"service", K::categorical},
        {"state", K::categorical},
        {"spkts", K::numeric},
        {"dpkts", K::numeric},
        {"sbytes", K::numeric},
        {"dbytes", K::numeric},
        {"rate", K::numeric},
        {"sttl", K::numeric},
        {"dttl", K::numeric},
        {"sload", K::numeric},
        {"dload", K::numeric},
        {"sloss", K::numeric},
        {"dloss", K::numeric},
        {"sinpkt", K::numeric},
        {"dinpkt", K::numeric},
        {"sjit", K::numeric},
        {"djit", K::numeric},
        {"swin", K::numeric},
        {"stcpb", K::numeric},
        {"dtcpb", K::numeric},
        {"dwin", K::numeric},
        {"tcprtt", K::numeric},
        {"synack", K::numeric},
        {"ackdat", K::numeric},
        {"smean", K::numeric},
        {"dmean", K::numeric},
        {"trans_depth", K::numeric},
        {"response_body_len", K::numeric},
        {"ct_srv_src", K::numeric},
        {"ct_state_ttl", K::numeric},
        {"ct_dst_ltm", K::numeric},
        {"ct_src_dport_ltm", K::numeric},
        {"ct_dst_sport_ltm", K::numeric},
        {"ct_dst_src_ltm", K::numeric},
        {"is_ftp_login", K::numeric},
        {"ct_ftp_cmd", K::numeric},
        {"ct_flw_http_mthd", K::numeric},
        {"ct_src_ltm", K::numeric},
        {"ct_srv_dst", K::numeric},
        {"is_sm_ips_ports", K::numeric},
        {"attack_cat", K::attack_cat},
        {"label", K::label},
    };
    return ColumnSchema(std::move(cols));
}

} // namespace nids
