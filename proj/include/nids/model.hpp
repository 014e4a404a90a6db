#pragma once

#include <cstdint>
#include <vector>

#include "nids/architecture.hpp"
#include "nids/matrix.hpp"

namespace nids {

struct Model {
    ArchitectureSpec spec;
    Network<float> net;
};

Model build(Family family, std::size_t input_features, double dropout_rate = 0.5,
            std::uint64_t seed = 42);

// Casts one already-selected-and-scaled row to the 32-bit network input.
// Shared by source-domain prediction and the bundled inference engine so
// both sides run the exact same arithmetic.
Tensor<float> row_to_input(const double* row, std::size_t n, const ArchitectureSpec& spec);

// One probability per row, network in eval mode.
std::vector<float> predict_proba(Model& model, const FeatureMatrix& X);

std::vector<int> classify(const std::vector<float>& scores, double threshold = 0.5);

} // namespace nids
