#include "nids/train.hpp"

#include <chrono>
#include <cmath>
#include <fstream>

#include "nids/errors.hpp"
#include "nids/kv.hpp"
#include "nids/rng.hpp"

namespace nids {

namespace {

class Adam {
public:
    Adam(std::vector<Tensor<float>*> params, const TrainConfig& config)
        : params_(std::move(params)), lr_(config.lr), beta1_(config.beta1),
          beta2_(config.beta2), eps_(config.epsilon) {
        for (const Tensor<float>* p : params_) {
            m_.emplace_back(p->size(), 0.0f);
            v_.emplace_back(p->size(), 0.0f);
        }
    }

    void step(const std::vector<Tensor<float>*>& grads) {
        ++t_;
        const float correction1 = 1.0f - static_cast<float>(std::pow(beta1_, t_));
        const float correction2 = 1.0f - static_cast<float>(std::pow(beta2_, t_));
        const float b1 = static_cast<float>(beta1_);
        const float b2 = static_cast<float>(beta2_);
        const float lr = static_cast<float>(lr_);
        const float eps = static_cast<float>(eps_);
        for (std::size_t k = 0; k < params_.size(); ++k) {
            float* w = params_[k]->data.data();
            const float* g = grads[k]->data.data();
            float* m = m_[k].data();
            float* v = v_[k].data();
            const std::size_t n = params_[k]->size();
            for (std::size_t i = 0; i < n; ++i) {
                m[i] = b1 * m[i] + (1.0f - b1) * g[i];
                v[i] = b2 * v[i] + (1.0f - b2) * g[i] * g[i];
                float m_hat = m[i] / correction1;
                float v_hat = v[i] / correction2;
                w[i] -= lr * m_hat / (std::sqrt(v_hat) + eps);
            }
        }
    }

private:
    std::vector<Tensor<float>*> params_;
    std::vector<std::vector<float>> m_, v_;
    double lr_, beta1_, beta2_, eps_;
    long t_ = 0;
};

double validation_accuracy(Model& model, const FeatureMatrix& X, const LabelVector& y) {
    std::size_t correct = 0;
    for (std::size_t r = 0; r < X.rows; ++r) {
        Tensor<float> x = row_to_input(X.row(r), X.cols(), model.spec);
        float p = model.net.forward(x, /*training=*/false)[0];
        int pred = p >= 0.5f ? 1 : 0;
        correct += pred == y[r];
    }
    return X.rows ? static_cast<double>(correct) / static_cast<double>(X.rows) : 0.0;
}

std::vector<Tensor<float>> snapshot(Network<float>& net) {
    std::vector<Tensor<float>> copy;
    for (Tensor<float>* p : net.params()) copy.push_back(*p);
    return copy;
}

void restore(Network<float>& net, const std::vector<Tensor<float>>& saved) {
    auto params = net.params();
    for (std::size_t i = 0; i < params.size(); ++i) *params[i] = saved[i];
}

} // namespace

void TrainConfig::validate() const {
    if (lr <= 0.0) fail("E_CONFIG", "learning rate must be > 0");
    if (dropout_rate < 0.0 || dropout_rate >= 1.0) fail("E_CONFIG", "dropout rate must be in [0,1)");
    if (batch_size < 1) fail("E_CONFIG", "batch_size must be >= 1");
    if (max_epochs < 0) fail("E_CONFIG", "max_epochs must be >= 0");
    if (patience < 0) fail("E_CONFIG", "patience must be >= 0");
}

TrainReport train(Model& model, const FeatureMatrix& X_train, const LabelVector& y_train,
                  const FeatureMatrix& X_val, const LabelVector& y_val,
                  const TrainConfig& config) {
    config.validate();
    if (X_train.rows == 0 || X_val.rows == 0) fail("E_ARGS", "empty training or validation data");
    if (X_train.rows != y_train.size() || X_val.rows != y_val.size())
        fail("E_ARGS", "label count does not match row count");
    if (X_train.cols() != model.spec.input_features || X_val.cols() != model.spec.input_features)
        fail("E_SHAPE", "data width does not match model input_features");

    TrainReport report;
    if (config.max_epochs == 0) return report;

    auto t_start = std::chrono::steady_clock::now();

    auto params = model.net.params();
    auto grads = model.net.grads();
    Adam adam(params, config);
    auto dropout_rng = make_rng(config.seed, /*stream=*/2);

    const std::size_t n = X_train.rows;
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;

    double best_val = -1.0;
    std::vector<Tensor<float>> best_weights;

    int epochs_since_best = 0;
    for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
        auto shuffle_rng = make_rng(config.seed, /*stream=*/1000 + static_cast<std::uint64_t>(epoch));
        fisher_yates(order, shuffle_rng);

        double loss_sum = 0.0;
        std::size_t correct = 0;
        const std::size_t batch_count = (n + config.batch_size - 1) / config.batch_size;
        for (std::size_t b = 0; b < batch_count; ++b) {
            const std::size_t lo = b * config.batch_size;
            const std::size_t hi = std::min(n, lo + config.batch_size);
            const float inv_batch = 1.0f / static_cast<float>(hi - lo);

            model.net.zero_grads();
            double batch_loss = 0.0;
            for (std::size_t k = lo; k < hi; ++k) {
                const std::size_t r = order[k];
                Tensor<float> x = row_to_input(X_train.row(r), X_train.cols(), model.spec);
                float p = model.net.forward(x, /*training=*/true, &dropout_rng)[0];
                auto bce = bce_loss(p, y_train[r]);
                batch_loss += bce.loss;
                correct += (p >= 0.5f ? 1 : 0) == y_train[r];
                Tensor<float> seed_grad({1});
                seed_grad[0] = bce.grad * inv_batch;
                model.net.backward(seed_grad);
            }
            batch_loss *= inv_batch;
            if (!std::isfinite(batch_loss))
                throw DivergenceError("training diverged (non-finite loss) at epoch " +
                                          std::to_string(epoch) + ", batch " + std::to_string(b),
                                      epoch, static_cast<int>(b));
            loss_sum += batch_loss * static_cast<double>(hi - lo);
            adam.step(grads);
        }

        EpochStats stats;
        stats.epoch = epoch;
        stats.train_loss = loss_sum / static_cast<double>(n);
        stats.train_acc = static_cast<double>(correct) / static_cast<double>(n);
        stats.val_acc = validation_accuracy(model, X_val, y_val);
        report.epochs.push_back(stats);

        if (stats.val_acc > best_val) {  // strict: ties keep the earliest epoch
            best_val = stats.val_acc;
            best_weights = snapshot(model.net);
            report.chosen_epoch = epoch;
            epochs_since_best = 0;
        } else {
            ++epochs_since_best;
            if (epochs_since_best >= config.patience) break;
        }
    }

    if (!best_weights.empty()) restore(model.net, best_weights);

    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return report;
}

void write_train_report_csv(const std::string& path, const TrainReport& report) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail("E_IO", "cannot write '" + path + "'");
    out << "epoch,train_loss,train_acc,val_acc\n";
    for (const auto& e : report.epochs)
        out << e.epoch << "," << format_double(e.train_loss) << "," << format_double(e.train_acc)
            << "," << format_double(e.val_acc) << "\n";
    if (!out) fail("E_IO", "write failed for '" + path + "'");
}

} // namespace nids
