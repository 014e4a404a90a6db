#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "nids/errors.hpp"

namespace nids {

// Dense row-major design matrix with named columns. Doubles end to end;
// the cast to 32-bit happens once, at the network input.
struct FeatureMatrix {
    std::vector<std::string> columns;
    std::size_t rows = 0;
    std::vector<double> values;

    std::size_t cols() const { return columns.size(); }

    double at(std::size_t r, std::size_t c) const { return values[r * columns.size() + c]; }
    double& at(std::size_t r, std::size_t c) { return values[r * columns.size() + c]; }

    const double* row(std::size_t r) const { return values.data() + r * columns.size(); }

    std::size_t col_index(const std::string& name) const {
        for (std::size_t i = 0; i < columns.size(); ++i)
            if (columns[i] == name) return i;
        fail("E_SCHEMA", "feature matrix has no column '" + name + "'");
    }

    static FeatureMatrix zeros(std::vector<std::string> names, std::size_t rows) {
        FeatureMatrix m;
        m.columns = std::move(names);
        m.rows = rows;
        m.values.assign(rows * m.columns.size(), 0.0);
        return m;
    }
};

using LabelVector = std::vector<int>;

} // namespace nids
