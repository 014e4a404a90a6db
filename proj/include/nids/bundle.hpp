#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nids/architecture.hpp"
#include "nids/dataset.hpp"
#include "nids/importance.hpp"
#include "nids/model.hpp"
#include "nids/scaler.hpp"
#include "nids/schema.hpp"
#include "nids/tensor.hpp"

namespace nids {

// Portable transfer artifact. On-disk layout (all integers little-endian):
//
//   bytes 0..3   magic "NIDT"
//   bytes 4..7   u32 format version (1)
//   bytes 8..11  u32 header length in bytes
//   ...          header: UTF-8 JSON (architecture, selection, scaler,
//                encoding, column schema, creation metadata)
//   ...          weight payload, one block per parameter tensor in layer
//                order: u32 rank, u32 dims[rank], then IEEE-754 32-bit
//                values
//
// Export then import reproduces the header text and every weight bit
// exactly; the 64-bit FNV-1a digest of the whole file is printed on both
// sides for operator verification.
struct Bundle {
    ArchitectureSpec architecture;
    FeatureSelection selection;
    ScalerParams scaler;
    EncodingMap encoding;
    ColumnSchema schema;
    bool clamp = true;
    std::uint64_t seed = 0;
    std::uint64_t train_rows = 0;
    std::uint64_t val_rows = 0;
    std::vector<Tensor<float>> weights;
};

inline constexpr char kBundleMagic[4] = {'N', 'I', 'D', 'T'};
inline constexpr std::uint32_t kBundleVersion = 1;

std::uint64_t fnv1a64(const void* data, std::size_t size);

std::vector<std::uint8_t> encode_bundle(const Bundle& bundle);
Bundle decode_bundle(const std::uint8_t* data, std::size_t size);

struct ExportResult {
    std::uint64_t bytes = 0;
    std::uint64_t digest = 0;
};

// Validates shape consistency, then writes atomically (temp file + rename).
ExportResult export_bundle(const Bundle& bundle, const std::string& path);

Bundle import_bundle(const std::string& path, std::uint64_t* digest_out = nullptr);

// Collects everything the target domain needs from a trained source model.
Bundle make_bundle(Model& model, const FeatureSelection& selection, const ScalerParams& scaler,
                   const EncodingMap& encoding, const ColumnSchema& schema, bool clamp,
                   std::uint64_t seed, std::uint64_t train_rows, std::uint64_t val_rows);

std::string digest_hex(std::uint64_t digest);

} // namespace nids
