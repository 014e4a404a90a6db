// nids: command-line front end for the intrusion-detection pipeline:
// prepare data, score features, train, export a model bundle, and run
// frozen inference / evaluation / benchmarks against it.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "nids/benchmark.hpp"
#include "nids/bundle.hpp"
#include "nids/config.hpp"
#include "nids/csv.hpp"
#include "nids/dataset.hpp"
#include "nids/engine.hpp"
#include "nids/errors.hpp"
#include "nids/importance.hpp"
#include "nids/kv.hpp"
#include "nids/metrics.hpp"
#include "nids/model.hpp"
#include "nids/scaler.hpp"
#include "nids/train.hpp"

namespace fs = std::filesystem;
using namespace nids;

namespace {

// Outputs land on a temp path first and are renamed only on success, so
// composed scripts never observe partial files.
void atomic_write_text(const std::string& path, const std::string& content) {
    fs::path tmp = fs::path(path);
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) fail("E_IO", "cannot write '" + tmp.string() + "'");
        out << content;
        if (!out) fail("E_IO", "write failed for '" + tmp.string() + "'");
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) fail("E_IO", "cannot rename '" + tmp.string() + "': " + ec.message());
}

void atomic_write_records(const std::string& path, const ColumnSchema& schema,
                          const std::vector<FlowRecord>& records) {
    fs::path tmp = fs::path(path);
    tmp += ".tmp";
    write_csv(tmp.string(), schema, records);
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) fail("E_IO", "cannot rename '" + tmp.string() + "': " + ec.message());
}

void ensure_dir(const std::string& path) {
    std::error_code ec;
    fs::create_directories(path, ec);
    if (ec) fail("E_IO", "cannot create directory '" + path + "': " + ec.message());
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("E_IO", "cannot read '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void echo_config(const RunConfig& config, const std::string& out_dir) {
    atomic_write_text((fs::path(out_dir) / "config.txt").string(), config.to_kv().dump());
}

struct ConfigCliState {
    std::string config_path;
    RunConfig config;

    // flag storage; applied over the file values only when the flag was given
    std::uint64_t seed = 0;
    int top_k = 0, trees = 0, max_epochs = 0, batch_size = 0, patience = 0, threads = 0;
    double lr = 0, dropout = 0, threshold = 0;
};

// defaults < config file < command-line flags
void add_config_options(CLI::App* cmd, ConfigCliState& state) {
    cmd->add_option("--config", state.config_path, "key = value config file");
    cmd->add_option("--seed", state.seed, "RNG seed");
    cmd->add_option("--top-k", state.top_k, "features kept by selection");
    cmd->add_option("--trees", state.trees, "extra-trees ensemble size");
    cmd->add_option("--epochs", state.max_epochs, "max training epochs");
    cmd->add_option("--batch", state.batch_size, "mini-batch size");
    cmd->add_option("--patience", state.patience, "early-stop patience (epochs)");
    cmd->add_option("--lr", state.lr, "Adam learning rate");
    cmd->add_option("--dropout", state.dropout, "dropout rate");
    cmd->add_option("--threshold", state.threshold, "classification threshold");
    cmd->add_option("--threads", state.threads, "thread limit (0 = all cores)");
}

RunConfig resolve_config(const CLI::App* cmd, ConfigCliState& state) {
    RunConfig config;
    if (!state.config_path.empty()) config.apply(KvDoc::load(state.config_path));
    if (cmd->count("--seed")) config.seed = state.seed;
    if (cmd->count("--top-k")) config.top_k = state.top_k;
    if (cmd->count("--trees")) config.trees = state.trees;
    if (cmd->count("--epochs")) config.max_epochs = state.max_epochs;
    if (cmd->count("--batch")) config.batch_size = state.batch_size;
    if (cmd->count("--patience")) config.patience = state.patience;
    if (cmd->count("--lr")) config.lr = state.lr;
    if (cmd->count("--dropout")) config.dropout = state.dropout;
    if (cmd->count("--threshold")) config.threshold = state.threshold;
    if (cmd->count("--threads")) config.threads = state.threads;
    config.validate();
    return config;
}

int cmd_prepare(const std::vector<std::string>& inputs, const std::string& schema_path,
                const std::string& out_dir, const RunConfig& config) {
    ColumnSchema schema = ColumnSchema::load_manifest(schema_path);

    std::vector<FlowRecord> records;
    for (const auto& path : inputs) {
        auto part = load_csv(path, schema);
        std::cerr << path << ": " << part.size() << " records\n";
        records.insert(records.end(), std::make_move_iterator(part.begin()),
                       std::make_move_iterator(part.end()));
    }

    EncodingMap encoding = fit_encoding(records, schema, schema.categorical_names());

    SplitSpec spec;
    spec.ratios = {config.train_ratio, config.val_ratio, config.test_ratio};
    spec.seed = config.seed;
    spec.stratify = config.stratify;
    SplitResult splits = split(records, spec);

    ensure_dir(out_dir);
    fs::path dir(out_dir);
    atomic_write_records((dir / "train.csv").string(), schema, splits.train);
    atomic_write_records((dir / "val.csv").string(), schema, splits.val);
    atomic_write_records((dir / "test.csv").string(), schema, splits.test);
    atomic_write_text((dir / "schema.txt").string(), schema.manifest_text());
    atomic_write_text((dir / "encoding.json").string(), encoding_to_json_text(encoding));

    KvDoc provenance;
    provenance.set("seed", static_cast<long long>(config.seed));
    provenance.set("train_ratio", config.train_ratio);
    provenance.set("val_ratio", config.val_ratio);
    provenance.set("test_ratio", config.test_ratio);
    provenance.set("stratify", std::string(config.stratify ? "true" : "false"));
    provenance.set("total", static_cast<long long>(records.size()));
    provenance.set("train", static_cast<long long>(splits.train.size()));
    provenance.set("val", static_cast<long long>(splits.val.size()));
    provenance.set("test", static_cast<long long>(splits.test.size()));
    atomic_write_text((dir / "provenance.txt").string(), provenance.dump());
    echo_config(config, out_dir);

    std::cout << "total=" << records.size() << " train=" << splits.train.size()
              << " val=" << splits.val.size() << " test=" << splits.test.size() << "\n";
    return 0;
}

ExtraTreesConfig tree_config(const RunConfig& config) {
    ExtraTreesConfig tc;
    tc.tree_count = config.trees;
    tc.candidate_features = config.candidate_features;
    tc.min_samples_split = config.min_samples_split;
    tc.seed = config.seed;
    tc.threads = config.threads;
    return tc;
}

int cmd_importance(const std::string& train_csv, const std::string& schema_path,
                   const std::string& out_csv, const RunConfig& config) {
    ColumnSchema schema = ColumnSchema::load_manifest(schema_path);
    auto records = load_csv(train_csv, schema);
    std::cerr << train_csv << ": " << records.size() << " records\n";
    EncodingMap encoding = fit_encoding(records, schema, schema.categorical_names());
    auto [X, y] = to_matrix(records, schema, encoding);
    ImportanceReport report = fit_importance(X, y, tree_config(config));
    if (report.degenerate)
        std::cerr << "warning: no split possible anywhere, all scores are 0\n";

    fs::path tmp = fs::path(out_csv);
    tmp += ".tmp";
    write_importance_csv(tmp.string(), report);
    std::error_code ec;
    fs::rename(tmp, out_csv, ec);
    if (ec) fail("E_IO", "cannot rename '" + tmp.string() + "': " + ec.message());
    std::cout << "features=" << report.scores.size() << " trees=" << report.tree_count << "\n";
    return 0;
}

int cmd_train(const std::string& family_name, const std::string& data_dir,
              const std::string& out_dir, const RunConfig& config) {
    Family family = family_from_string(family_name);
    fs::path dir(data_dir);

    ColumnSchema schema = ColumnSchema::load_manifest((dir / "schema.txt").string());
    auto train_records = load_csv((dir / "train.csv").string(), schema);
    auto val_records = load_csv((dir / "val.csv").string(), schema);
    std::cerr << "train=" << train_records.size() << " val=" << val_records.size() << "\n";

    EncodingMap encoding;
    fs::path encoding_path = dir / "encoding.json";
    if (fs::exists(encoding_path))
        encoding = encoding_from_json_text(read_text(encoding_path.string()));
    else
        encoding = fit_encoding(train_records, schema, schema.categorical_names());

    auto [X_train, y_train] = to_matrix(train_records, schema, encoding);
    auto [X_val, y_val] = to_matrix(val_records, schema, encoding);

    std::cerr << "scoring feature importance (" << config.trees << " trees)...\n";
    ImportanceReport importance = fit_importance(X_train, y_train, tree_config(config));
    FeatureSelection selection = select_top_k(importance, config.top_k);
    ScalerParams scaler = fit_scaler(X_train, selection);
    FeatureMatrix Xs_train = transform(X_train, selection, scaler, config.clamp);
    FeatureMatrix Xs_val = transform(X_val, selection, scaler, config.clamp);

    Model model = build(family, static_cast<std::size_t>(config.top_k), config.dropout,
                        config.seed);
    TrainConfig tc;
    tc.lr = config.lr;
    tc.beta1 = config.beta1;
    tc.beta2 = config.beta2;
    tc.epsilon = config.epsilon;
    tc.batch_size = config.batch_size;
    tc.max_epochs = config.max_epochs;
    tc.patience = config.patience;
    tc.dropout_rate = config.dropout;
    tc.seed = config.seed;

    std::cerr << "training " << family_name << " (" << model.net.param_count()
              << " parameters)...\n";
    TrainReport report = train(model, Xs_train, y_train, Xs_val, y_val, tc);
    for (const auto& e : report.epochs)
        std::cerr << "epoch " << e.epoch << ": loss=" << e.train_loss
                  << " train_acc=" << e.train_acc << " val_acc=" << e.val_acc << "\n";

    Bundle bundle = make_bundle(model, selection, scaler, encoding, schema, config.clamp,
                                config.seed, train_records.size(), val_records.size());

    ensure_dir(out_dir);
    fs::path out(out_dir);
    ExportResult exported = export_bundle(bundle, (out / "model.nidt").string());
    write_train_report_csv((out / "train_report.csv").string(), report);
    write_importance_csv((out / "importance.csv").string(), importance);
    atomic_write_text((out / "selection.txt").string(), selection_to_kv_text(selection));
    atomic_write_text((out / "scaler.txt").string(), scaler_to_kv_text(scaler));
    echo_config(config, out_dir);

    double best_val = 0.0;
    for (const auto& e : report.epochs)
        if (e.epoch == report.chosen_epoch) best_val = e.val_acc;
    std::cout << "epochs=" << report.epochs.size() << " chosen_epoch=" << report.chosen_epoch
              << " val_acc=" << best_val << " bundle_bytes=" << exported.bytes
              << " digest=" << digest_hex(exported.digest) << "\n";
    return 0;
}

int cmd_export(const std::string& model_dir, const std::string& out_path) {
    fs::path checkpoint = fs::path(model_dir) / "model.nidt";
    Bundle bundle = import_bundle(checkpoint.string());
    ExportResult exported = export_bundle(bundle, out_path);
    std::cout << "bytes=" << exported.bytes << " digest=" << digest_hex(exported.digest) << "\n";
    return 0;
}

int cmd_infer(const std::string& bundle_path, const std::string& input_csv,
              const std::string& out_csv, int threads, double threshold) {
    std::uint64_t digest = 0;
    InferenceEngine engine = InferenceEngine::load(bundle_path, threads, &digest);
    std::cerr << "bundle digest=" << digest_hex(digest) << "\n";

    auto records = load_csv(input_csv, engine.schema());
    auto result = engine.infer(records, threads, threshold);

    std::ostringstream out;
    out << "row,score,label\n";
    for (std::size_t i = 0; i < result.scores.size(); ++i)
        out << i << "," << format_float(result.scores[i]) << "," << result.labels[i] << "\n";
    atomic_write_text(out_csv, out.str());
    std::cout << "records=" << records.size() << "\n";
    return 0;
}

int cmd_evaluate(const std::string& bundle_path, const std::string& input_csv,
                 const std::string& out_dir, int threads, double threshold) {
    std::uint64_t digest = 0;
    InferenceEngine engine = InferenceEngine::load(bundle_path, threads, &digest);
    std::cerr << "bundle digest=" << digest_hex(digest) << "\n";

    auto records = load_csv(input_csv, engine.schema());
    auto result = engine.infer(records, threads, threshold);

    std::vector<int> labels(records.size());
    for (std::size_t i = 0; i < records.size(); ++i) labels[i] = records[i].label;
    EvalReport report = evaluate(labels, result.scores, threshold);

    ensure_dir(out_dir);
    fs::path dir(out_dir);
    atomic_write_text((dir / "report.txt").string(), report_text(report));
    atomic_write_text((dir / "report.json").string(), report_json_text(report));
    fs::path roc_tmp = dir / "roc.csv.tmp";
    write_roc_csv(roc_tmp.string(), report.curve);
    std::error_code ec;
    fs::rename(roc_tmp, dir / "roc.csv", ec);
    if (ec) fail("E_IO", "cannot rename roc.csv: " + ec.message());

    std::cout << report_text(report);
    return 0;
}

int cmd_benchmark(const std::string& bundle_path, const std::string& input_csv, int threads,
                  const std::string& domain, const std::string& log_path) {
    InferenceEngine engine = InferenceEngine::load(bundle_path, threads);
    auto records = load_csv(input_csv, engine.schema());

    BenchmarkResult result = run_benchmark(engine, records, threads);
    std::string model = to_string(engine.bundle().architecture.family);
    append_benchmark_csv(log_path, model, domain, result);

    std::cout << "model=" << model << " domain=" << domain << " threads=" << result.thread_count
              << " records=" << result.record_count
              << " wall_seconds=" << format_double(result.wall_seconds)
              << " records_per_second=" << format_double(result.records_per_second) << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"CNN-LSTM network intrusion detection toolkit"};
    app.require_subcommand(1);

    // prepare
    auto* prepare = app.add_subcommand("prepare", "load, encode and split flow CSVs");
    std::vector<std::string> prepare_inputs;
    std::string prepare_schema, prepare_out;
    ConfigCliState prepare_cfg;
    prepare->add_option("--input", prepare_inputs, "input CSV (repeatable)")->required();
    prepare->add_option("--schema", prepare_schema, "column manifest")->required();
    prepare->add_option("--out", prepare_out, "output directory")->required();
    add_config_options(prepare, prepare_cfg);

    // importance
    auto* importance = app.add_subcommand("importance", "rank features by impurity decrease");
    std::string imp_train, imp_schema, imp_out;
    ConfigCliState imp_cfg;
    importance->add_option("--train", imp_train, "training CSV")->required();
    importance->add_option("--schema", imp_schema, "column manifest")->required();
    importance->add_option("--out", imp_out, "output CSV")->required();
    add_config_options(importance, imp_cfg);

    // train
    auto* train_cmd = app.add_subcommand("train", "train a model on a prepared directory");
    std::string train_family = "cnn-lstm", train_data, train_out;
    ConfigCliState train_cfg;
    train_cmd->add_option("--family", train_family, "dnn|cnn|cnn-lstm");
    train_cmd->add_option("--data", train_data, "prepared data directory")->required();
    train_cmd->add_option("--out", train_out, "model output directory")->required();
    add_config_options(train_cmd, train_cfg);

    // export
    auto* export_cmd = app.add_subcommand("export", "write a portable model bundle");
    std::string export_model, export_out;
    export_cmd->add_option("--model", export_model, "model directory from train")->required();
    export_cmd->add_option("--out", export_out, "bundle file")->required();

    // infer
    auto* infer_cmd = app.add_subcommand("infer", "score raw records with a bundle");
    std::string infer_bundle, infer_input, infer_out;
    int infer_threads = 0;
    double infer_threshold = 0.5;
    infer_cmd->add_option("--bundle", infer_bundle, "bundle file")->required();
    infer_cmd->add_option("--input", infer_input, "input CSV")->required();
    infer_cmd->add_option("--out", infer_out, "output CSV")->required();
    infer_cmd->add_option("--threads", infer_threads, "thread limit (0 = all cores)");
    infer_cmd->add_option("--threshold", infer_threshold, "classification threshold");

    // evaluate
    auto* eval_cmd = app.add_subcommand("evaluate", "score and compute metrics");
    std::string eval_bundle, eval_input, eval_out;
    int eval_threads = 0;
    double eval_threshold = 0.5;
    eval_cmd->add_option("--bundle", eval_bundle, "bundle file")->required();
    eval_cmd->add_option("--input", eval_input, "labeled input CSV")->required();
    eval_cmd->add_option("--out", eval_out, "output directory")->required();
    eval_cmd->add_option("--threads", eval_threads, "thread limit (0 = all cores)");
    eval_cmd->add_option("--threshold", eval_threshold, "classification threshold");

    // benchmark
    auto* bench_cmd = app.add_subcommand("benchmark", "measure scoring throughput");
    std::string bench_bundle, bench_input, bench_domain = "target";
    std::string bench_log = "benchmarks.csv";
    int bench_threads = 1;
    bench_cmd->add_option("--bundle", bench_bundle, "bundle file")->required();
    bench_cmd->add_option("--input", bench_input, "input CSV")->required();
    bench_cmd->add_option("--threads", bench_threads, "thread count (1 = single-vCPU target)");
    bench_cmd->add_option("--domain", bench_domain, "label for the log row");
    bench_cmd->add_option("--log", bench_log, "CSV log to append to");

    CLI11_PARSE(app, argc, argv);

    try {
        if (prepare->parsed())
            return cmd_prepare(prepare_inputs, prepare_schema, prepare_out,
                               resolve_config(prepare, prepare_cfg));
        if (importance->parsed())
            return cmd_importance(imp_train, imp_schema, imp_out,
                                  resolve_config(importance, imp_cfg));
        if (train_cmd->parsed())
            return cmd_train(train_family, train_data, train_out,
                             resolve_config(train_cmd, train_cfg));
        if (export_cmd->parsed()) return cmd_export(export_model, export_out);
        if (infer_cmd->parsed())
            return cmd_infer(infer_bundle, infer_input, infer_out, infer_threads,
                             infer_threshold);
        if (eval_cmd->parsed())
            return cmd_evaluate(eval_bundle, eval_input, eval_out, eval_threads, eval_threshold);
        if (bench_cmd->parsed())
            return cmd_benchmark(bench_bundle, bench_input, bench_threads, bench_domain,
                                 bench_log);
    } catch (const Error& e) {
        std::cerr << e.code() << ": " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "E_INTERNAL: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
