#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>
#include <vector>

#include "nids/rng.hpp"
#include "nids/tensor.hpp"

namespace nids {

template <typename T>
T sigmoid_fn(T z) {
    return T(1) / (T(1) + std::exp(-z));
}

// A layer owns its parameters, their gradient accumulators and the forward
// cache needed by backward. forward/backward are exact analytic pairs;
// every layer is checked against central finite differences in the test
// suite.
template <typename T>
class Layer {
public:
    virtual ~Layer() = default;

    virtual const char* kind() const = 0;
    virtual std::vector<std::size_t> output_shape(const std::vector<std::size_t>& in) const = 0;
    virtual Tensor<T> forward(const Tensor<T>& x, bool training, std::mt19937_64* rng) = 0;
    virtual Tensor<T> backward(const Tensor<T>& grad_out) = 0;
    virtual std::vector<Tensor<T>*> params() { return {}; }
    virtual std::vector<Tensor<T>*> grads() { return {}; }
    virtual std::unique_ptr<Layer<T>> clone() const = 0;

    std::size_t param_count() {
        std::size_t n = 0;
        for (const Tensor<T>* p : params()) n += p->size();
        return n;
    }
};

// 1-D convolution, kernel 3, stride 1, zero padding 1 on each end, so the
// sequence length is preserved. W is [kernel, in_channels, filters].
template <typename T>
class Conv1d final : public Layer<T> {
public:
    static constexpr std::size_t kKernel = 3;

    Conv1d(std::size_t in_channels, std::size_t filters)
        : in_channels_(in_channels), filters_(filters),
          W_({kKernel, in_channels, filters}), b_({filters}),
          gW_({kKernel, in_channels, filters}), gb_({filters}) {}

    const char* kind() const override { return "conv1d"; }
    std::size_t in_channels() const { return in_channels_; }
    std::size_t filters() const { return filters_; }

    std::vector<std::size_t> output_shape(const std::vector<std::size_t>& in) const override {
        if (in.size() != 2 || in[1] != in_channels_)
            fail("E_SHAPE", std::string("conv1d expects (L,") + std::to_string(in_channels_) +
                                "), got " + shape_string(in));
        return {in[0], filters_};
    }

    Tensor<T> forward(const Tensor<T>& x, bool, std::mt19937_64*) override {
        if (x.rank() != 2 || x.dim(1) != in_channels_)
            fail("E_SHAPE", "conv1d input channels mismatch: got " + shape_string(x.shape));
        const std::size_t L = x.dim(0);
        Tensor<T> out({L, filters_});
        for (std::size_t t = 0; t < L; ++t) {
            T* o = &out.data[t * filters_];
            for (std::size_t f = 0; f < filters_; ++f) o[f] = b_[f];
            for (std::size_t j = 0; j < kKernel; ++j) {
                std::size_t tt = t + j;
                if (tt < 1 || tt > L) continue;  // zero padding of 1
                const T* xr = &x.data[(tt - 1) * in_channels_];
                for (std::size_t c = 0; c < in_channels_; ++c) {
                    T xv = xr[c];
                    if (xv == T(0)) continue;
                    const T* w = &W_.data[(j * in_channels_ + c) * filters_];
                    for (std::size_t f = 0; f < filters_; ++f) o[f] += w[f] * xv;
                }
            }
        }
        x_ = x;
        return out;
    }

    Tensor<T> backward(const Tensor<T>& grad_out) override {
        const std::size_t L = x_.dim(0);
        if (!grad_out.same_shape({L, filters_}))
            fail("E_SHAPE", "conv1d backward shape mismatch");
        Tensor<T> gx({L, in_channels_});
        for (std::size_t t = 0; t < L; ++t) {
            const T* g = &grad_out.data[t * filters_];
            for (std::size_t f = 0; f < filters_; ++f) gb_[f] += g[f];
            for (std::size_t j = 0; j < kKernel; ++j) {
                std::size_t tt = t + j;
                if (tt < 1 || tt > L) continue;
                const T* xr = &x_.data[(tt - 1) * in_channels_];
                T* gxr = &gx.data[(tt - 1) * in_channels_];
                for (std::size_t c = 0; c < in_channels_; ++c) {
                    const T* w = &W_.data[(j * in_channels_ + c) * filters_];
                    T* gw = &gW_.data[(j * in_channels_ + c) * filters_];
                    T xv = xr[c];
                    T acc = T(0);
                    for (std::size_t f = 0; f < filters_; ++f) {
                        gw[f] += g[f] * xv;
                        acc += g[f] * w[f];
                    }
                    gxr[c] += acc;
                }
            }
        }
        return gx;
    }

    std::vector<Tensor<T>*> params() override { return {&W_, &b_}; }
    std::vector<Tensor<T>*> grads() override { return {&gW_, &gb_}; }

    std::unique_ptr<Layer<T>> clone() const override { return std::make_unique<Conv1d>(*this); }

private:
    std::size_t in_channels_;
    std::size_t filters_;
    Tensor<T> W_, b_, gW_, gb_;
    Tensor<T> x_;
};

template <typename T>
class Relu final : public Layer<T> {
public:
    const char* kind() const override { return "relu"; }

    std::vector<std::size_t> output_shape(const std::vector<std::size_t>& in) const override {
        return in;
    }

    Tensor<T> forward(const Tensor<T>& x, bool, std::mt19937_64*) override {
        Tensor<T> out = x;
        for (T& v : out.data) v = std::max(v, T(0));
        x_ = x;
        return out;
    }

    Tensor<T> backward(const Tensor<T>& grad_out) override {
        Tensor<T> gx = grad_out;
        for (std::size_t i = 0; i < gx.size(); ++i)
            if (x_[i] <= T(0)) gx[i] = T(0);
        return gx;
    }

    std::unique_ptr<Layer<T>> clone() const override { return std::make_unique<Relu>(*this); }

private:
    Tensor<T> x_;
};

// Non-overlapping window max, pool = stride = 2. Gradient routes to the
// argmax position, first index on ties.
template <typename T>
class MaxPool1d final : public Layer<T> {
public:
    static constexpr std::size_t kPool = 2;

    const char* kind() const override { return "maxpool1d"; }

    std::vector<std::size_t> output_shape(const std::vector<std::size_t>& in) const override {
        if (in.size() != 2 || in[0] < kPool)
            fail("E_SHAPE", "maxpool1d needs (L>=2, C), got " + shape_string(in));
        return {in[0] / kPool, in[1]};
    }

    Tensor<T> forward(const Tensor<T>& x, bool, std::mt19937_64*) override {
        if (x.rank() != 2 || x.dim(0) < kPool)
            fail("E_SHAPE", "maxpool1d input too short: " + shape_string(x.shape));
        const std::size_t L = x.dim(0), C = x.dim(1), Lo = L / kPool;
        Tensor<T> out({Lo, C});
        argmax_.assign(Lo * C, 0);
        for (std::size_t t = 0; t < Lo; ++t) {
            for (std::size_t c = 0; c < C; ++c) {
                std::size_t first = (kPool * t) * C + c;
                std::size_t second = (kPool * t + 1) * C + c;
                // strict > keeps the first index on ties
                bool take_second = x.data[second] > x.data[first];
                out.data[t * C + c] = take_second ? x.data[second] : x.data[first];
                argmax_[t * C + c] = take_second ? second : first;
            }
        }
        in_shape_ = x.shape;
        return out;
    }

    Tensor<T> backward(const Tensor<T>& grad_out) override {
        Tensor<T> gx(in_shape_);
        for (std::size_t i = 0; i < grad_out.size(); ++i) gx.data[argmax_[i]] += grad_out.data[i];
        return gx;
    }

    std::unique_ptr<Layer<T>> clone() const override { return std::make_unique<MaxPool1d>(*this); }

private:
    std::vector<std::size_t> argmax_;
    std::vector<std::size_t> in_shape_;
};

// LSTM over a (T, C) sequence, h_0 = c_0 = 0, emitting the final hidden
// state only. Gate rows of W/U/b are packed input, forget, candidate,
// output. Backward is full backpropagation through time.
template <typename T>
class Lstm final : public Layer<T> {
public:
    Lstm(std::size_t in_features, std::size_t hidden)
        : in_(in_features), hidden_(hidden),
          W_({4 * hidden, in_features}), U_({4 * hidden, hidden}), b_({4 * hidden}),
          gW_({4 * hidden, in_features}), gU_({4 * hidden, hidden}), gb_({4 * hidden}) {}

    const char* kind() const override { return "lstm"; }
    std::size_t hidden() const { return hidden_; }

    std::vector<std::size_t> output_shape(const std::vector<std::size_t>& in) const override {
        if (in.size() != 2 || in[1] != in_)
            fail("E_SHAPE", std::string("lstm expects (T,") + std::to_string(in_) + "), got " +
                                shape_string(in));
        if (in[0] == 0) fail("E_SHAPE", "lstm needs at least one timestep");
        return {hidden_};
    }

    Tensor<T> forward(const Tensor<T>& x, bool, std::mt19937_64*) override {
        if (x.rank() != 2 || x.dim(1) != in_)
            fail("E_SHAPE", "lstm input shape mismatch: " + shape_string(x.shape));
        const std::size_t steps = x.dim(0);
        if (steps == 0) fail("E_SHAPE", "lstm needs at least one timestep");
        const std::size_t H = hidden_;

        x_ = x;
        hs_.assign((steps + 1) * H, T(0));
        cs_.assign((steps + 1) * H, T(0));
        gates_.assign(steps * 4 * H, T(0));
        tanh_c_.assign(steps * H, T(0));

        std::vector<T> a(4 * H);
        for (std::size_t t = 0; t < steps; ++t) {
            const T* xt = &x.data[t * in_];
            const T* h_prev = &hs_[t * H];
            const T* c_prev = &cs_[t * H];
            for (std::size_t r = 0; r < 4 * H; ++r) {
                T acc = b_[r];
                const T* w = &W_.data[r * in_];
                for (std::size_t c = 0; c < in_; ++c) acc += w[c] * xt[c];
                const T* u = &U_.data[r * H];
                for (std::size_t h = 0; h < H; ++h) acc += u[h] * h_prev[h];
                a[r] = acc;
            }
            T* gate = &gates_[t * 4 * H];
            T* h = &hs_[(t + 1) * H];
            T* c = &cs_[(t + 1) * H];
            T* tc = &tanh_c_[t * H];
            for (std::size_t h_i = 0; h_i < H; ++h_i) {
                T gi = sigmoid_fn(a[h_i]);
                T gf = sigmoid_fn(a[H + h_i]);
                T gg = std::tanh(a[2 * H + h_i]);
                T go = sigmoid_fn(a[3 * H + h_i]);
                gate[h_i] = gi;
                gate[H + h_i] = gf;
                gate[2 * H + h_i] = gg;
                gate[3 * H + h_i] = go;
                c[h_i] = gf * c_prev[h_i] + gi * gg;
                tc[h_i] = std::tanh(c[h_i]);
                h[h_i] = go * tc[h_i];
            }
        }
        Tensor<T> out({H});
        std::copy(hs_.begin() + steps * H, hs_.end(), out.data.begin());
        return out;
    }

    Tensor<T> backward(const Tensor<T>& grad_out) override {
        const std::size_t H = hidden_;
        if (!grad_out.same_shape({H})) fail("E_SHAPE", "lstm backward shape mismatch");
        const std::size_t steps = x_.dim(0);

        Tensor<T> gx({steps, in_});
        std::vector<T> dh(grad_out.data.begin(), grad_out.data.end());
        std::vector<T> dc(H, T(0));
        std::vector<T> da(4 * H);
        std::vector<T> dh_prev(H);

        for (std::size_t t = steps; t-- > 0;) {
            const T* gate = &gates_[t * 4 * H];
            const T* tc = &tanh_c_[t * H];
            const T* c_prev = &cs_[t * H];
            const T* h_prev = &hs_[t * H];
            const T* xt = &x_.data[t * in_];

            for (std::size_t h = 0; h < H; ++h) {
                T gi = gate[h], gf = gate[H + h], gg = gate[2 * H + h], go = gate[3 * H + h];
                T d_c = dc[h] + dh[h] * go * (T(1) - tc[h] * tc[h]);
                T d_i = d_c * gg;
                T d_f = d_c * c_prev[h];
                T d_g = d_c * gi;
                T d_o = dh[h] * tc[h];
                da[h] = d_i * gi * (T(1) - gi);
                da[H + h] = d_f * gf * (T(1) - gf);
                da[2 * H + h] = d_g * (T(1) - gg * gg);
                da[3 * H + h] = d_o * go * (T(1) - go);
                dc[h] = d_c * gf;
            }

            std::fill(dh_prev.begin(), dh_prev.end(), T(0));
            T* gxt = &gx.data[t * in_];
            for (std::size_t r = 0; r < 4 * H; ++r) {
                T d = da[r];
                gb_[r] += d;
                if (d == T(0)) continue;
                T* gw = &gW_.data[r * in_];
                const T* w = &W_.data[r * in_];
                for (std::size_t c = 0; c < in_; ++c) {
                    gw[c] += d * xt[c];
                    gxt[c] += d * w[c];
                }
                T* gu = &gU_.data[r * H];
                const T* u = &U_.data[r * H];
                for (std::size_t h = 0; h < H; ++h) {
                    gu[h] += d * h_prev[h];
                    dh_prev[h] += d * u[h];
                }
            }
            dh = dh_prev;
        }
        return gx;
    }

    std::vector<Tensor<T>*> params() override { return {&W_, &U_, &b_}; }
    std::vector<Tensor<T>*> grads() override { return {&gW_, &gU_, &gb_}; }

    std::unique_ptr<Layer<T>> clone() const override { return std::make_unique<Lstm>(*this); }

private:
    std::size_t in_;
    std::size_t hidden_;
    Tensor<T> W_, U_, b_, gW_, gU_, gb_;
    Tensor<T> x_;
    std::vector<T> hs_, cs_, gates_, tanh_c_;
};

template <typename T>
class Dense final : public Layer<T> {
public:
    Dense(std::size_t in_features, std::size_t out_features)
        : in_(in_features), out_(out_features),
          W_({out_features, in_features}), b_({out_features}),
          gW_({out_features, in_features}), gb_({out_features}) {}

    const char* kind() const override { return "dense"; }
    std::size_t out_features() const { return out_; }

    std::vector<std::size_t> output_shape(const std::vector<std::size_t>& in) const override {
        if (in.size() != 1 || in[0] != in_)
            fail("E_SHAPE", std::string("dense expects (") + std::to_string(in_) + "), got " +
                                shape_string(in));
        return {out_};
    }

    Tensor<T> forward(const Tensor<T>& x, bool, std::mt19937_64*) override {
        if (x.rank() != 1 || x.dim(0) != in_)
            fail("E_SHAPE", "dense input shape mismatch: " + shape_string(x.shape));
        Tensor<T> out({out_});
        for (std::size_t r = 0; r < out_; ++r) {
            const T* w = &W_.data[r * in_];
            T acc = b_[r];
            for (std::size_t c = 0; c < in_; ++c) acc += w[c] * x[c];
            out[r] = acc;
        }
        x_ = x;
        return out;
    }

    Tensor<T> backward(const Tensor<T>& grad_out) override {
        if (!grad_out.same_shape({out_})) fail("E_SHAPE", "dense backward shape mismatch");
        Tensor<T> gx({in_});
        for (std::size_t r = 0; r < out_; ++r) {
            T g = grad_out[r];
            gb_[r] += g;
            T* gw = &gW_.data[r * in_];
            const T* w = &W_.data[r * in_];
            for (std::size_t c = 0; c < in_; ++c) {
                gw[c] += g * x_[c];
                gx[c] += g * w[c];
            }
        }
        return gx;
    }

    std::vector<Tensor<T>*> params() override { return {&W_, &b_}; }
    std::vector<Tensor<T>*> grads() override { return {&gW_, &gb_}; }

    std::unique_ptr<Layer<T>> clone() const override { return std::make_unique<Dense>(*this); }

private:
    std::size_t in_;
    std::size_t out_;
    Tensor<T> W_, b_, gW_, gb_;
    Tensor<T> x_;
};

// Inverted dropout: each unit is zeroed with probability `rate` during
// training and survivors are scaled by 1/(1-rate); evaluation mode is the
// identity.
template <typename T>
class Dropout final : public Layer<T> {
public:
    explicit Dropout(double rate) : rate_(rate) {
        if (rate < 0.0 || rate >= 1.0) fail("E_CONFIG", "dropout rate must be in [0,1)");
    }

    const char* kind() const override { return "dropout"; }
    double rate() const { return rate_; }

    std::vector<std::size_t> output_shape(const std::vector<std::size_t>& in) const override {
        return in;
    }

    Tensor<T> forward(const Tensor<T>& x, bool training, std::mt19937_64* rng) override {
        if (!training || rate_ == 0.0) {
            mask_.clear();
            return x;
        }
        if (!rng) fail("E_ARGS", "dropout in training mode needs an RNG");
        const T keep_scale = T(1.0 / (1.0 - rate_));
        mask_.assign(x.size(), T(0));
        Tensor<T> out = x;
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (unit(*rng) < rate_) {
                out[i] = T(0);
            } else {
                mask_[i] = keep_scale;
                out[i] *= keep_scale;
            }
        }
        return out;
    }

    Tensor<T> backward(const Tensor<T>& grad_out) override {
        if (mask_.empty()) return grad_out;  // eval-mode identity
        Tensor<T> gx = grad_out;
        for (std::size_t i = 0; i < gx.size(); ++i) gx[i] *= mask_[i];
        return gx;
    }

    std::unique_ptr<Layer<T>> clone() const override { return std::make_unique<Dropout>(*this); }

private:
    double rate_;
    std::vector<T> mask_;
};

template <typename T>
class Sigmoid final : public Layer<T> {
public:
    const char* kind() const override { return "sigmoid"; }

    std::vector<std::size_t> output_shape(const std::vector<std::size_t>& in) const override {
        return in;
    }

    Tensor<T> forward(const Tensor<T>& x, bool, std::mt19937_64*) override {
        Tensor<T> out = x;
        for (T& v : out.data) v = sigmoid_fn(v);
        y_ = out;
        return out;
    }

    Tensor<T> backward(const Tensor<T>& grad_out) override {
        Tensor<T> gx = grad_out;
        for (std::size_t i = 0; i < gx.size(); ++i) gx[i] *= y_[i] * (T(1) - y_[i]);
        return gx;
    }

    std::unique_ptr<Layer<T>> clone() const override { return std::make_unique<Sigmoid>(*this); }

private:
    Tensor<T> y_;
};

template <typename T>
class Flatten final : public Layer<T> {
public:
    const char* kind() const override { return "flatten"; }

    std::vector<std::size_t> output_shape(const std::vector<std::size_t>& in) const override {
        return {Tensor<T>::element_count(in)};
    }

    Tensor<T> forward(const Tensor<T>& x, bool, std::mt19937_64*) override {
        in_shape_ = x.shape;
        Tensor<T> out = x;
        out.shape = {x.size()};
        return out;
    }

    Tensor<T> backward(const Tensor<T>& grad_out) override {
        Tensor<T> gx = grad_out;
        gx.shape = in_shape_;
        return gx;
    }

    std::unique_ptr<Layer<T>> clone() const override { return std::make_unique<Flatten>(*this); }

private:
    std::vector<std::size_t> in_shape_;
};

// Binary cross-entropy against a {0,1} target with epsilon clamping. The
// gradient is taken at the clamped probability.
template <typename T>
struct BceResult {
    T loss;
    T grad;
};

template <typename T>
BceResult<T> bce_loss(T p, int y) {
    if (y != 0 && y != 1) fail("E_ARGS", "bce target must be 0 or 1");
    const T eps = T(1e-7);
    T q = std::clamp(p, eps, T(1) - eps);
    T loss = y ? -std::log(q) : -std::log(T(1) - q);
    T grad = y ? -T(1) / q : T(1) / (T(1) - q);
    return {loss, grad};
}

// Mean loss over a batch plus per-element gradients.
template <typename T>
std::pair<T, std::vector<T>> bce_loss_batch(const std::vector<T>& p, const std::vector<int>& y) {
    if (p.size() != y.size()) fail("E_ARGS", "bce batch size mismatch");
    if (p.empty()) fail("E_ARGS", "bce on an empty batch");
    T total = T(0);
    std::vector<T> grads(p.size());
    const T scale = T(1) / static_cast<T>(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        auto r = bce_loss(p[i], y[i]);
        total += r.loss;
        grads[i] = r.grad * scale;
    }
    return {total * scale, std::move(grads)};
}

} // namespace nids
