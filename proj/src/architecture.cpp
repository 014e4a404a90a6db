#include "nids/architecture.hpp"

#include <cmath>

#include "nids/errors.hpp"
#include "nids/rng.hpp"

namespace nids {

std::string to_string(Family family) {
    switch (family) {
        case Family::dnn: return "dnn";
        case Family::cnn: return "cnn";
        case Family::cnn_lstm: return "cnn-lstm";
    }
    return "?";
}

Family family_from_string(const std::string& text) {
    if (text == "dnn") return Family::dnn;
    if (text == "cnn") return Family::cnn;
    if (text == "cnn-lstm" || text == "cnn_lstm") return Family::cnn_lstm;
    fail("E_CONFIG", "unknown model family '" + text + "' (dnn|cnn|cnn-lstm)");
}

std::vector<std::size_t> ArchitectureSpec::input_shape() const {
    if (family == Family::dnn) return {input_features};
    return {input_features, 1};
}

namespace {

void append_dense_tail(std::vector<LayerSpec>& layers, double dropout_rate) {
    layers.push_back({"dense", 256, 0.0});
    layers.push_back({"relu", 0, 0.0});
    layers.push_back({"dropout", 0, dropout_rate});
    layers.push_back({"dense", 128, 0.0});
    layers.push_back({"relu", 0, 0.0});
    layers.push_back({"dropout", 0, dropout_rate});
    layers.push_back({"dense", 1, 0.0});
    layers.push_back({"sigmoid", 0, 0.0});
}

void append_conv_stack(std::vector<LayerSpec>& layers) {
    for (std::size_t filters : {64, 128, 256}) {
        layers.push_back({"conv1d", filters, 0.0});
        layers.push_back({"relu", 0, 0.0});
        layers.push_back({"conv1d", filters, 0.0});
        layers.push_back({"relu", 0, 0.0});
        layers.push_back({"maxpool1d", 0, 0.0});
    }
}

} // namespace

ArchitectureSpec make_architecture(Family family, std::size_t input_features,
                                   double dropout_rate) {
    // Three pooling stages each halve the sequence; anything shorter than 8
    // reaches a pool with a single element left.
    if (family != Family::dnn && input_features < 8)
        fail("E_ARGS", "input_features = " + std::to_string(input_features) +
                           " too short for convolutional families (need >= 8)");
    if (input_features < 1) fail("E_ARGS", "input_features must be >= 1");

    ArchitectureSpec spec;
    spec.family = family;
    spec.input_features = input_features;
    switch (family) {
        case Family::cnn_lstm:
            append_conv_stack(spec.layers);
            spec.layers.push_back({"lstm", 100, 0.0});
            break;
        case Family::cnn:
            append_conv_stack(spec.layers);
            spec.layers.push_back({"flatten", 0, 0.0});
            break;
        case Family::dnn:
            break;
    }
    append_dense_tail(spec.layers, dropout_rate);
    return spec;
}

Network<float> instantiate(const ArchitectureSpec& spec) {
    Network<float> net;
    std::vector<std::size_t> shape = spec.input_shape();
    for (const auto& layer : spec.layers) {
        if (layer.kind == "conv1d") {
            if (shape.size() != 2) fail("E_SHAPE", "conv1d needs a (L,C) input");
            net.add(std::make_unique<Conv1d<float>>(shape[1], layer.units));
        } else if (layer.kind == "relu") {
            net.add(std::make_unique<Relu<float>>());
        } else if (layer.kind == "maxpool1d") {
            net.add(std::make_unique<MaxPool1d<float>>());
        } else if (layer.kind == "lstm") {
            if (shape.size() != 2) fail("E_SHAPE", "lstm needs a (T,C) input");
            net.add(std::make_unique<Lstm<float>>(shape[1], layer.units));
        } else if (layer.kind == "dense") {
            if (shape.size() != 1) fail("E_SHAPE", "dense needs a flat input");
            net.add(std::make_unique<Dense<float>>(shape[0], layer.units));
        } else if (layer.kind == "dropout") {
            net.add(std::make_unique<Dropout<float>>(layer.rate));
        } else if (layer.kind == "sigmoid") {
            net.add(std::make_unique<Sigmoid<float>>());
        } else if (layer.kind == "flatten") {
            net.add(std::make_unique<Flatten<float>>());
        } else {
            fail("E_SCHEMA", "unknown layer kind '" + layer.kind + "'");
        }
        // validates composition as we go
        shape = net.layer(net.layer_count() - 1).output_shape(shape);
    }
    return net;
}

namespace {

void glorot_fill(Tensor<float>& W, std::size_t fan_in, std::size_t fan_out,
                 std::mt19937_64& rng) {
    double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    for (float& w : W.data) w = static_cast<float>((2.0 * unit(rng) - 1.0) * limit);
}

} // namespace

void init_weights(Network<float>& net, std::uint64_t seed) {
    auto rng = make_rng(seed, /*stream=*/1);
    for (std::size_t i = 0; i < net.layer_count(); ++i) {
        Layer<float>& layer = net.layer(i);
        std::string kind = layer.kind();
        auto params = layer.params();
        if (kind == "conv1d") {
            auto* conv = static_cast<Conv1d<float>*>(&layer);
            Tensor<float>& W = *params[0];
            glorot_fill(W, Conv1d<float>::kKernel * conv->in_channels(),
                        Conv1d<float>::kKernel * conv->filters(), rng);
            std::fill(params[1]->data.begin(), params[1]->data.end(), 0.0f);
        } else if (kind == "dense") {
            Tensor<float>& W = *params[0];
            glorot_fill(W, W.dim(1), W.dim(0), rng);
            std::fill(params[1]->data.begin(), params[1]->data.end(), 0.0f);
        } else if (kind == "lstm") {
            auto* lstm = static_cast<Lstm<float>*>(&layer);
            const std::size_t H = lstm->hidden();
            Tensor<float>& W = *params[0];
            Tensor<float>& U = *params[1];
            Tensor<float>& b = *params[2];
            const std::size_t in = W.dim(1);
            // per-gate blocks so each H-row slab gets its own fan
            for (std::size_t gate = 0; gate < 4; ++gate) {
                double limit_w = std::sqrt(6.0 / static_cast<double>(in + H));
                double limit_u = std::sqrt(6.0 / static_cast<double>(H + H));
                for (std::size_t r = gate * H; r < (gate + 1) * H; ++r) {
                    for (std::size_t c = 0; c < in; ++c)
                        W.at(r, c) = static_cast<float>((2.0 * unit(rng) - 1.0) * limit_w);
                    for (std::size_t c = 0; c < H; ++c)
                        U.at(r, c) = static_cast<float>((2.0 * unit(rng) - 1.0) * limit_u);
                }
            }
            std::fill(b.data.begin(), b.data.end(), 0.0f);
            for (std::size_t h = 0; h < H; ++h) b[H + h] = 1.0f;  // forget gate
        }
    }
}

} // namespace nids
