#include "nids/benchmark.hpp"

#include <chrono>

#include "nids/errors.hpp"

namespace nids {

BenchmarkResult run_benchmark(const InferenceEngine& engine,
                              const std::vector<FlowRecord>& records, int threads) {
    if (records.empty()) fail("E_ARGS", "benchmark needs a non-empty record set");
    if (threads < 1) fail("E_CONFIG", "benchmark thread count must be >= 1");

    engine.infer(records, threads);  // warm-up, not timed

    auto t0 = std::chrono::steady_clock::now();
    engine.infer(records, threads);
    auto t1 = std::chrono::steady_clock::now();

    BenchmarkResult result;
    result.wall_seconds = std::chrono::duration<double>(t1 - t0).count();
    result.record_count = records.size();
    result.thread_count = threads;
    result.records_per_second =
        result.wall_seconds > 0.0
            ? static_cast<double>(result.record_count) / result.wall_seconds
            : 0.0;
    return result;
}

} // namespace nids
