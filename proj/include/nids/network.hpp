#pragma once

#include <memory>
#include <random>
#include <vector>

#include "nids/layers.hpp"

namespace nids {

// Ordered layer stack. Forward/backward thread the activation through the
// layers; parameters and gradients are exposed flattened, in layer order,
// which is also the serialization order of the weight payload.
template <typename T>
class Network {
public:
    Network() = default;
    Network(Network&&) noexcept = default;
    Network& operator=(Network&&) noexcept = default;

    Network(const Network& other) { *this = other; }
    Network& operator=(const Network& other) {
        layers_.clear();
        layers_.reserve(other.layers_.size());
        for (const auto& layer : other.layers_) layers_.push_back(layer->clone());
        return *this;
    }

    void add(std::unique_ptr<Layer<T>> layer) { layers_.push_back(std::move(layer)); }

    std::size_t layer_count() const { return layers_.size(); }
    Layer<T>& layer(std::size_t i) { return *layers_[i]; }
    const Layer<T>& layer(std::size_t i) const { return *layers_[i]; }

    Tensor<T> forward(const Tensor<T>& x, bool training = false,
                      std::mt19937_64* rng = nullptr) {
        if (!x.all_finite()) fail("E_ARGS", "non-finite value in network input");
        Tensor<T> a = x;
        for (auto& layer : layers_) {
            a = layer->forward(a, training, rng);
#ifndef NDEBUG
            if (!a.all_finite())
                fail("E_DIVERGED", std::string("non-finite activation after ") + layer->kind());
#endif
        }
        return a;
    }

    Tensor<T> backward(const Tensor<T>& grad_out) {
        Tensor<T> g = grad_out;
        for (std::size_t i = layers_.size(); i-- > 0;) g = layers_[i]->backward(g);
        return g;
    }

    std::vector<Tensor<T>*> params() {
        std::vector<Tensor<T>*> out;
        for (auto& layer : layers_)
            for (Tensor<T>* p : layer->params()) out.push_back(p);
        return out;
    }

    std::vector<Tensor<T>*> grads() {
        std::vector<Tensor<T>*> out;
        for (auto& layer : layers_)
            for (Tensor<T>* g : layer->grads()) out.push_back(g);
        return out;
    }

    void zero_grads() {
        for (Tensor<T>* g : grads()) std::fill(g->data.begin(), g->data.end(), T(0));
    }

    std::size_t param_count() {
        std::size_t n = 0;
        for (auto& layer : layers_) n += layer->param_count();
        return n;
    }

    // Output shapes after each layer for a given input shape; validates
    // that consecutive layers compose.
    std::vector<std::vector<std::size_t>> shape_chain(std::vector<std::size_t> input) const {
        std::vector<std::vector<std::size_t>> chain;
        for (const auto& layer : layers_) {
            input = layer->output_shape(input);
            chain.push_back(input);
        }
        return chain;
    }

private:
    std::vector<std::unique_ptr<Layer<T>>> layers_;
};

} // namespace nids
