#pragma once

#include <vector>

#include "nids/engine.hpp"
#include "nids/metrics.hpp"

namespace nids {

// Wall-clock over a full scoring pass (preprocessing + network, no file
// I/O) after one untimed warm-up pass. threads = 1 simulates the
// single-vCPU target domain.
BenchmarkResult run_benchmark(const InferenceEngine& engine,
                              const std::vector<FlowRecord>& records, int threads);

} // namespace nids
