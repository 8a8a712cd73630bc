#pragma once

#include <cstdint>
#include <random>

namespace mnet {

// splitmix64 step; used to derive independent child seeds from a parent
// seed so that concurrent and serial execution consume identical streams.
inline std::uint64_t mix_seed(std::uint64_t seed) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t child_index) {
    return mix_seed(parent ^ mix_seed(child_index + 1));
}

using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t seed) { return Rng(seed); }

} // namespace mnet
