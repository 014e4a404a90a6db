#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace nids {

// Deterministic helpers on top of mt19937_64. The engine's output sequence
// is pinned by the standard; std::uniform_*_distribution is not, so every
// draw here goes through our own mapping to keep results identical across
// compilers and platforms.

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Derives an independent stream seed from (seed, stream index).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    return splitmix64(splitmix64(seed) ^ (stream + 0x9e3779b97f4a7c15ULL));
}

inline std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream = 0) {
    return std::mt19937_64(derive_seed(seed, stream));
}

// Uniform in [0, 1) with 53 random bits.
inline double unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform in the open interval (0, 1).
inline double unit_open(std::mt19937_64& rng) {
    return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

// Uniform integer in [0, n). Plain modulo: the bias at 64 bits is
// irrelevant here and the mapping is fully deterministic.
inline std::size_t bounded(std::mt19937_64& rng, std::size_t n) {
    return static_cast<std::size_t>(rng() % n);
}

template <typename T>
void fisher_yates(std::vector<T>& items, std::mt19937_64& rng) {
    for (std::size_t i = items.size(); i > 1; --i) {
        std::size_t j = bounded(rng, i);
        std::swap(items[i - 1], items[j]);
    }
}

} // namespace nids
