#include "nids/bundle.hpp"

#include <bit>
#include <cstring>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "nids/errors.hpp"

namespace nids {

using nlohmann::json;

namespace {

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    out.push_back(static_cast<std::uint8_t>(v >> 24));
}

std::uint32_t get_u32(const std::uint8_t* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

json architecture_to_json(const ArchitectureSpec& spec) {
    json layers = json::array();
    for (const auto& layer : spec.layers) {
        json item;
        item["kind"] = layer.kind;
        if (layer.units > 0) item["units"] = layer.units;
        if (layer.kind == "dropout") item["rate"] = layer.rate;
        layers.push_back(item);
    }
    return json{{"family", to_string(spec.family)},
                {"input_features", spec.input_features},
                {"layers", layers}};
}

ArchitectureSpec architecture_from_json(const json& j) {
    ArchitectureSpec spec;
    spec.family = family_from_string(j.at("family").get<std::string>());
    spec.input_features = j.at("input_features").get<std::size_t>();
    for (const auto& item : j.at("layers")) {
        LayerSpec layer;
        layer.kind = item.at("kind").get<std::string>();
        layer.units = item.value("units", std::size_t{0});
        layer.rate = item.value("rate", 0.0);
        spec.layers.push_back(layer);
    }
    return spec;
}

json schema_to_json(const ColumnSchema& schema) {
    json cols = json::array();
    for (const auto& c : schema.columns()) cols.push_back({c.name, to_string(c.kind)});
    return json{{"version", schema.version()}, {"columns", cols}};
}

ColumnSchema schema_from_json(const json& j) {
    std::vector<Column> cols;
    for (const auto& item : j.at("columns"))
        cols.push_back({item.at(0).get<std::string>(),
                        column_kind_from_string(item.at(1).get<std::string>())});
    ColumnSchema schema(std::move(cols));
    schema.set_version(j.at("version").get<int>());
    return schema;
}

json header_to_json(const Bundle& bundle) {
    json scaler = json::object();
    for (const auto& [name, range] : bundle.scaler.ranges)
        scaler[name] = {{"min", range.min}, {"max", range.max}};

    json encoding = json::object();
    for (const auto& [column, values] : bundle.encoding.columns()) {
        json codes = json::object();
        for (const auto& [value, code] : values) codes[value] = code;
        encoding[column] = codes;
    }

    return json{{"architecture", architecture_to_json(bundle.architecture)},
                {"clamp", bundle.clamp},
                {"encoding", encoding},
                {"meta",
                 {{"seed", bundle.seed},
                  {"train_rows", bundle.train_rows},
                  {"val_rows", bundle.val_rows}}},
                {"scaler", scaler},
                {"schema", schema_to_json(bundle.schema)},
                {"selection", {{"k", bundle.selection.k}, {"kept", bundle.selection.kept}}}};
}

Bundle header_from_json(const json& j) {
    Bundle bundle;
    bundle.architecture = architecture_from_json(j.at("architecture"));
    bundle.clamp = j.at("clamp").get<bool>();
    bundle.schema = schema_from_json(j.at("schema"));

    const json& sel = j.at("selection");
    bundle.selection.k = sel.at("k").get<int>();
    bundle.selection.kept = sel.at("kept").get<std::vector<std::string>>();

    for (const auto& [name, range] : j.at("scaler").items())
        bundle.scaler.ranges[name] = {range.at("min").get<double>(),
                                      range.at("max").get<double>()};

    std::map<std::string, std::map<std::string, int>> codes;
    for (const auto& [column, values] : j.at("encoding").items()) {
        std::map<std::string, int>& column_codes = codes[column];
        for (const auto& [value, code] : values.items()) column_codes[value] = code.get<int>();
    }
    bundle.encoding = EncodingMap(std::move(codes));

    const json& meta = j.at("meta");
    bundle.seed = meta.at("seed").get<std::uint64_t>();
    bundle.train_rows = meta.at("train_rows").get<std::uint64_t>();
    bundle.val_rows = meta.at("val_rows").get<std::uint64_t>();
    return bundle;
}

// Parameter tensor shapes the architecture implies, in payload order.
std::vector<std::vector<std::size_t>> expected_weight_shapes(const ArchitectureSpec& spec) {
    Network<float> net = instantiate(spec);
    std::vector<std::vector<std::size_t>> shapes;
    for (Tensor<float>* p : net.params()) shapes.push_back(p->shape);
    return shapes;
}

void check_consistency(const Bundle& bundle) {
    if (bundle.selection.kept.size() != bundle.architecture.input_features)
        fail("E_SHAPE", "selection has " + std::to_string(bundle.selection.kept.size()) +
                            " features but the model consumes " +
                            std::to_string(bundle.architecture.input_features));
    for (const auto& name : bundle.selection.kept)
        if (bundle.scaler.ranges.find(name) == bundle.scaler.ranges.end())
            fail("E_SHAPE", "scaler is missing selected column '" + name + "'");
    auto shapes = expected_weight_shapes(bundle.architecture);
    if (shapes.size() != bundle.weights.size())
        fail("E_SHAPE", "architecture implies " + std::to_string(shapes.size()) +
                            " weight tensors, bundle has " +
                            std::to_string(bundle.weights.size()));
    for (std::size_t i = 0; i < shapes.size(); ++i)
        if (bundle.weights[i].shape != shapes[i])
            fail("E_SHAPE", "weight tensor " + std::to_string(i) + " has shape " +
                                shape_string(bundle.weights[i].shape) + ", expected " +
                                shape_string(shapes[i]));
}

} // namespace

std::uint64_t fnv1a64(const void* data, std::size_t size) {
    const auto* p = static_cast<const std::uint8_t*>(data);
    std::uint64_t hash = 14695981039346656037ULL;
    for (std::size_t i = 0; i < size; ++i) {
        hash ^= p[i];
        hash *= 1099511628211ULL;
    }
    return hash;
}

std::string digest_hex(std::uint64_t digest) {
    static const char* hex = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[i] = hex[digest & 0xF];
        digest >>= 4;
    }
    return out;
}

std::vector<std::uint8_t> encode_bundle(const Bundle& bundle) {
    check_consistency(bundle);
    std::string header = header_to_json(bundle).dump();

    std::vector<std::uint8_t> out;
    out.reserve(12 + header.size() + 64);
    out.insert(out.end(), kBundleMagic, kBundleMagic + 4);
    put_u32(out, kBundleVersion);
    put_u32(out, static_cast<std::uint32_t>(header.size()));
    out.insert(out.end(), header.begin(), header.end());

    for (const Tensor<float>& w : bundle.weights) {
        put_u32(out, static_cast<std::uint32_t>(w.shape.size()));
        for (std::size_t dim : w.shape) put_u32(out, static_cast<std::uint32_t>(dim));
        for (float v : w.data) put_u32(out, std::bit_cast<std::uint32_t>(v));
    }
    return out;
}

Bundle decode_bundle(const std::uint8_t* data, std::size_t size) {
    if (size < 12)
        throw PayloadLengthError("bundle too short: expected at least 12 bytes, got " +
                                 std::to_string(size));
    if (std::memcmp(data, kBundleMagic, 4) != 0) {
        std::string got(reinterpret_cast<const char*>(data), 4);
        for (char& c : got)
            if (c < 0x20 || c > 0x7e) c = '?';
        throw BadMagicError("bad magic '" + got + "', expected 'NIDT'");
    }
    std::uint32_t version = get_u32(data + 4);
    if (version != kBundleVersion)
        throw UnsupportedVersionError("unsupported bundle version " + std::to_string(version) +
                                      ", expected " + std::to_string(kBundleVersion));
    std::uint64_t header_len = get_u32(data + 8);
    if (12 + header_len > size)
        throw PayloadLengthError("truncated header: expected " + std::to_string(12 + header_len) +
                                 " bytes before payload, got " + std::to_string(size));

    Bundle bundle;
    try {
        json j = json::parse(data + 12, data + 12 + header_len);
        bundle = header_from_json(j);
    } catch (const json::exception& e) {
        throw HeaderSchemaError(std::string("malformed bundle header: ") + e.what());
    } catch (const Error& e) {
        throw HeaderSchemaError(std::string("malformed bundle header: ") + e.what());
    }

    auto shapes = expected_weight_shapes(bundle.architecture);
    std::uint64_t expected_payload = 0;
    for (const auto& s : shapes)
        expected_payload += 4 * (1 + s.size()) + 4 * Tensor<float>::element_count(s);
    std::uint64_t actual_payload = size - 12 - header_len;
    if (actual_payload != expected_payload)
        throw PayloadLengthError("payload length mismatch: expected " +
                                 std::to_string(expected_payload) + " bytes, got " +
                                 std::to_string(actual_payload));

    const std::uint8_t* p = data + 12 + header_len;
    for (const auto& expected_shape : shapes) {
        std::uint32_t rank = get_u32(p);
        p += 4;
        if (rank != expected_shape.size())
            throw HeaderSchemaError("weight tensor rank " + std::to_string(rank) +
                                    " does not match architecture");
        std::vector<std::size_t> shape(rank);
        for (std::uint32_t d = 0; d < rank; ++d) {
            shape[d] = get_u32(p);
            p += 4;
        }
        if (shape != expected_shape)
            throw HeaderSchemaError("weight tensor shape " + shape_string(shape) +
                                    " does not match architecture, expected " +
                                    shape_string(expected_shape));
        Tensor<float> w(shape);
        for (std::size_t i = 0; i < w.size(); ++i) {
            w[i] = std::bit_cast<float>(get_u32(p));
            p += 4;
        }
        bundle.weights.push_back(std::move(w));
    }
    return bundle;
}

ExportResult export_bundle(const Bundle& bundle, const std::string& path) {
    std::vector<std::uint8_t> bytes = encode_bundle(bundle);

    std::filesystem::path target(path);
    std::filesystem::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) fail("E_IO", "cannot write '" + tmp.string() + "'");
        out.write(reinterpret_cast<const char*>(bytes.data()),
                  static_cast<std::streamsize>(bytes.size()));
        if (!out) fail("E_IO", "write failed for '" + tmp.string() + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, target, ec);
    if (ec) fail("E_IO", "cannot rename '" + tmp.string() + "' to '" + path + "': " + ec.message());

    return {bytes.size(), fnv1a64(bytes.data(), bytes.size())};
}

Bundle import_bundle(const std::string& path, std::uint64_t* digest_out) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("E_IO", "cannot open bundle '" + path + "'");
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    if (digest_out) *digest_out = fnv1a64(bytes.data(), bytes.size());
    return decode_bundle(bytes.data(), bytes.size());
}

Bundle make_bundle(Model& model, const FeatureSelection& selection, const ScalerParams& scaler,
                   const EncodingMap& encoding, const ColumnSchema& schema, bool clamp,
                   std::uint64_t seed, std::uint64_t train_rows, std::uint64_t val_rows) {
    Bundle bundle;
    bundle.architecture = model.spec;
    bundle.selection = selection;
    bundle.scaler = scaler;
    bundle.encoding = encoding;
    bundle.schema = schema;
    bundle.clamp = clamp;
    bundle.seed = seed;
    bundle.train_rows = train_rows;
    bundle.val_rows = val_rows;
    for (Tensor<float>* p : model.net.params()) bundle.weights.push_back(*p);
    return bundle;
}

} // namespace nids
