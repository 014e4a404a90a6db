#include "nids/flow.hpp"

namespace nids {

RecordLayout::RecordLayout(const ColumnSchema& schema) {
    slots_.resize(schema.size(), 0);
    const auto& cols = schema.columns();
    for (std::size_t i = 0; i < cols.size(); ++i) {
        switch (cols[i].kind) {
            case ColumnKind::numeric:
            case ColumnKind::id:
                slots_[i] = numeric_count_++;
                break;
            case ColumnKind::categorical:
                slots_[i] = text_count_++;
                break;
            case ColumnKind::label:
            case ColumnKind::attack_cat:
                break;
        }
    }
}

} // namespace nids
