#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nids/bundle.hpp"
#include "nids/flow.hpp"

namespace nids {

// Frozen target-domain pipeline: bundled encoding -> selection ->
// source-fitted scaling -> network in eval mode. Nothing here mutates the
// weights; concurrent inference clones the network per worker so any
// thread count produces the identical scores of a sequential run.
class InferenceEngine {
public:
    explicit InferenceEngine(Bundle bundle, int thread_limit = 0);

    static InferenceEngine load(const std::string& path, int thread_limit = 0,
                                std::uint64_t* digest_out = nullptr);

    const Bundle& bundle() const { return bundle_; }
    const ColumnSchema& schema() const { return bundle_.schema; }

    int thread_limit() const { return thread_limit_; }
    void set_thread_limit(int threads) { thread_limit_ = threads; }

    struct Result {
        std::vector<float> scores;
        std::vector<int> labels;
    };

    // Records must have been loaded against the bundled schema.
    Result infer(const std::vector<FlowRecord>& records, int threads_override = 0,
                 double threshold = 0.5) const;

private:
    std::vector<float> score_rows(const FeatureMatrix& transformed, int threads) const;

    Bundle bundle_;
    Network<float> net_;
    int thread_limit_;
};

} // namespace nids
