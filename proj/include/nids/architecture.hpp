#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nids/network.hpp"

namespace nids {

enum class Family { dnn, cnn, cnn_lstm };

std::string to_string(Family family);
Family family_from_string(const std::string& text);

// One entry per runtime layer, activations included as their own rows.
struct LayerSpec {
    std::string kind;       // conv1d | relu | maxpool1d | lstm | dense | dropout | sigmoid | flatten
    std::size_t units = 0;  // conv1d filters, lstm hidden units, dense outputs
    double rate = 0.0;      // dropout only

    bool operator==(const LayerSpec&) const = default;
};

struct ArchitectureSpec {
    Family family = Family::cnn_lstm;
    std::size_t input_features = 32;
    std::vector<LayerSpec> layers;

    // (L, 1) for convolutional families, (L) for the plain DNN.
    std::vector<std::size_t> input_shape() const;

    bool operator==(const ArchitectureSpec&) const = default;
};

ArchitectureSpec make_architecture(Family family, std::size_t input_features,
                                   double dropout_rate = 0.5);

// Builds the runtime network for a spec with zeroed parameters, validating
// that consecutive shapes compose.
Network<float> instantiate(const ArchitectureSpec& spec);

// Glorot-uniform weights, zero biases, LSTM forget-gate bias 1.
void init_weights(Network<float>& net, std::uint64_t seed);

} // namespace nids
