#include "nids/config.hpp"

#include <cmath>

#include "nids/errors.hpp"

namespace nids {

namespace {

bool parse_bool(const std::string& text, const std::string& what) {
    if (text == "true" || text == "1") return true;
    if (text == "false" || text == "0") return false;
    fail("E_CONFIG", "expected true/false for " + what + ", got '" + text + "'");
}

} // namespace

void RunConfig::apply(const KvDoc& doc) {
    for (const auto& [key, value] : doc.entries()) {
        if (key == "seed")
            seed = static_cast<std::uint64_t>(parse_int(value, key));
        else if (key == "train_ratio")
            train_ratio = parse_double(value, key);
        else if (key == "val_ratio")
            val_ratio = parse_double(value, key);
        else if (key == "test_ratio")
            test_ratio = parse_double(value, key);
        else if (key == "stratify")
            stratify = parse_bool(value, key);
        else if (key == "trees")
            trees = static_cast<int>(parse_int(value, key));
        else if (key == "candidate_features")
            candidate_features = static_cast<int>(parse_int(value, key));
        else if (key == "min_samples_split")
            min_samples_split = static_cast<int>(parse_int(value, key));
        else if (key == "top_k")
            top_k = static_cast<int>(parse_int(value, key));
        else if (key == "lr")
            lr = parse_double(value, key);
        else if (key == "beta1")
            beta1 = parse_double(value, key);
        else if (key == "beta2")
            beta2 = parse_double(value, key);
        else if (key == "epsilon")
            epsilon = parse_double(value, key);
        else if (key == "batch_size")
            batch_size = static_cast<int>(parse_int(value, key));
        else if (key == "max_epochs")
            max_epochs = static_cast<int>(parse_int(value, key));
        else if (key == "patience")
            patience = static_cast<int>(parse_int(value, key));
        else if (key == "dropout")
            dropout = parse_double(value, key);
        else if (key == "threshold")
            threshold = parse_double(value, key);
        else if (key == "threads")
            threads = static_cast<int>(parse_int(value, key));
        else if (key == "clamp")
            clamp = parse_bool(value, key);
        else
            fail("E_CONFIG", "unknown config key '" + key + "'");
    }
}

KvDoc RunConfig::to_kv() const {
    KvDoc doc;
    doc.set("seed", static_cast<long long>(seed));
    doc.set("train_ratio", train_ratio);
    doc.set("val_ratio", val_ratio);
    doc.set("test_ratio", test_ratio);
    doc.set("stratify", std::string(stratify ? "true" : "false"));
    doc.set("trees", static_cast<long long>(trees));
    doc.set("candidate_features", static_cast<long long>(candidate_features));
    doc.set("min_samples_split", static_cast<long long>(min_samples_split));
    doc.set("top_k", static_cast<long long>(top_k));
    doc.set("lr", lr);
    doc.set("beta1", beta1);
    doc.set("beta2", beta2);
    doc.set("epsilon", epsilon);
    doc.set("batch_size", static_cast<long long>(batch_size));
    doc.set("max_epochs", static_cast<long long>(max_epochs));
    doc.set("patience", static_cast<long long>(patience));
    doc.set("dropout", dropout);
    doc.set("threshold", threshold);
    doc.set("threads", static_cast<long long>(threads));
    doc.set("clamp", std::string(clamp ? "true" : "false"));
    return doc;
}

RunConfig RunConfig::from_file(const std::string& path) {
    RunConfig config;
    config.apply(KvDoc::load(path));
    return config;
}

void RunConfig::validate() const {
    if (std::abs(train_ratio + val_ratio + test_ratio - 1.0) > 1e-9)
        fail("E_CONFIG", "split ratios must sum to 1");
    if (train_ratio <= 0 || val_ratio <= 0 || test_ratio <= 0)
        fail("E_CONFIG", "split ratios must be positive");
    if (trees < 1) fail("E_CONFIG", "trees must be >= 1");
    if (top_k < 1) fail("E_CONFIG", "top_k must be >= 1");
    if (lr <= 0) fail("E_CONFIG", "lr must be > 0");
    if (batch_size < 1) fail("E_CONFIG", "batch_size must be >= 1");
    if (dropout < 0 || dropout >= 1) fail("E_CONFIG", "dropout must be in [0,1)");
    if (threads < 0) fail("E_CONFIG", "threads must be >= 0");
}

} // namespace nids
