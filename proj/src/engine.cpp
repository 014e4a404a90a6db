#include "nids/engine.hpp"

#include <thread>

#include "nids/errors.hpp"
#include "nids/scaler.hpp"

namespace nids {

InferenceEngine::InferenceEngine(Bundle bundle, int thread_limit)
    : bundle_(std::move(bundle)), thread_limit_(thread_limit) {
    net_ = instantiate(bundle_.architecture);
    auto params = net_.params();
    if (params.size() != bundle_.weights.size())
        fail("E_SHAPE", "bundle weight count does not match architecture");
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (params[i]->shape != bundle_.weights[i].shape)
            fail("E_SHAPE", "bundle weight shape mismatch at tensor " + std::to_string(i));
        *params[i] = bundle_.weights[i];
    }
}

InferenceEngine InferenceEngine::load(const std::string& path, int thread_limit,
                                      std::uint64_t* digest_out) {
    return InferenceEngine(import_bundle(path, digest_out), thread_limit);
}

std::vector<float> InferenceEngine::score_rows(const FeatureMatrix& transformed,
                                               int threads) const {
    const std::size_t rows = transformed.rows;
    std::vector<float> scores(rows);
    if (rows == 0) return scores;

    unsigned hw = std::thread::hardware_concurrency();
    int limit = threads > 0 ? threads : (thread_limit_ > 0 ? thread_limit_
                                                           : static_cast<int>(hw ? hw : 1));
    std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(limit), rows);

    auto run_range = [&](Network<float> net, std::size_t lo, std::size_t hi) {
        for (std::size_t r = lo; r < hi; ++r) {
            Tensor<float> x =
                row_to_input(transformed.row(r), transformed.cols(), bundle_.architecture);
            scores[r] = net.forward(x, /*training=*/false)[0];
        }
    };

    if (workers <= 1) {
        run_range(net_, 0, rows);
        return scores;
    }
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        std::size_t lo = rows * w / workers;
        std::size_t hi = rows * (w + 1) / workers;
        pool.emplace_back(run_range, net_, lo, hi);
    }
    for (auto& t : pool) t.join();
    return scores;
}

InferenceEngine::Result InferenceEngine::infer(const std::vector<FlowRecord>& records,
                                               int threads_override, double threshold) const {
    Result result;
    if (records.empty()) return result;

    auto [X, labels_unused] = to_matrix(records, bundle_.schema, bundle_.encoding);
    FeatureMatrix scaled = transform(X, bundle_.selection, bundle_.scaler, bundle_.clamp);
    result.scores = score_rows(scaled, threads_override);
    result.labels.resize(result.scores.size());
    for (std::size_t i = 0; i < result.scores.size(); ++i)
        result.labels[i] = result.scores[i] >= threshold ? 1 : 0;
    return result;
}

} // namespace nids
