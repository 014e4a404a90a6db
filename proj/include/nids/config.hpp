#pragma once

#include <cstdint>
#include <string>

#include "nids/kv.hpp"

namespace nids {

// Flat tunables document for the whole pipeline, with defaults. Precedence
// is defaults < config file < command-line flags; the effective config is
// echoed into every output directory.
struct RunConfig {
    std::uint64_t seed = 42;
    double train_ratio = 0.6;
    double val_ratio = 0.2;
    double test_ratio = 0.2;
    bool stratify = true;

    int trees = 100;
    int candidate_features = 0;  // 0 = ceil(sqrt(d))
    int min_samples_split = 2;
    int top_k = 32;

    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    int batch_size = 256;
    int max_epochs = 50;
    int patience = 5;
    double dropout = 0.5;

    double threshold = 0.5;
    int threads = 0;  // 0 = all cores
    bool clamp = true;

    void apply(const KvDoc& doc);  // unknown keys rejected
    KvDoc to_kv() const;

    static RunConfig from_file(const std::string& path);
    void validate() const;
};

} // namespace nids
