#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nids/matrix.hpp"
#include "nids/model.hpp"

namespace nids {

struct TrainConfig {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    int batch_size = 256;
    int max_epochs = 50;
    int patience = 5;          // epochs without validation improvement
    double dropout_rate = 0.5; // applied at build time
    std::uint64_t seed = 42;

    void validate() const;
};

struct EpochStats {
    int epoch;  // 1-based
    double train_loss;
    double train_acc;
    double val_acc;
};

struct TrainReport {
    std::vector<EpochStats> epochs;
    int chosen_epoch = 0;  // epoch whose weights were kept; 0 when no epoch ran
    double wall_seconds = 0.0;
};

// Mini-batch Adam with seeded shuffling, per-epoch validation at threshold
// 0.5 and best-epoch checkpoint restore. Aborts with a DivergenceError
// naming epoch and batch if the loss goes non-finite.
TrainReport train(Model& model, const FeatureMatrix& X_train, const LabelVector& y_train,
                  const FeatureMatrix& X_val, const LabelVector& y_val,
                  const TrainConfig& config);

void write_train_report_csv(const std::string& path, const TrainReport& report);

} // namespace nids
