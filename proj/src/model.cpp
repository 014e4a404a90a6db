#include "nids/model.hpp"

#include "nids/errors.hpp"

namespace nids {

Model build(Family family, std::size_t input_features, double dropout_rate, std::uint64_t seed) {
    Model model;
    model.spec = make_architecture(family, input_features, dropout_rate);
    model.net = instantiate(model.spec);
    init_weights(model.net, seed);
    return model;
}

Tensor<float> row_to_input(const double* row, std::size_t n, const ArchitectureSpec& spec) {
    Tensor<float> x(spec.input_shape());
    for (std::size_t i = 0; i < n; ++i) x[i] = static_cast<float>(row[i]);
    return x;
}

std::vector<float> predict_proba(Model& model, const FeatureMatrix& X) {
    if (X.cols() != model.spec.input_features)
        fail("E_SHAPE", "matrix has " + std::to_string(X.cols()) + " columns, model expects " +
                            std::to_string(model.spec.input_features));
    std::vector<float> scores(X.rows);
    for (std::size_t r = 0; r < X.rows; ++r) {
        Tensor<float> x = row_to_input(X.row(r), X.cols(), model.spec);
        Tensor<float> out = model.net.forward(x, /*training=*/false);
        scores[r] = out[0];
    }
    return scores;
}

std::vector<int> classify(const std::vector<float>& scores, double threshold) {
    std::vector<int> labels(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i)
        labels[i] = scores[i] >= threshold ? 1 : 0;
    return labels;
}

} // namespace nids
