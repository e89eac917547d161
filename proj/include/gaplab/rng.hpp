#pragma once

#include <cstdint>
#include <random>

namespace gaplab {

using Engine = std::mt19937_64;

/// SplitMix64 finalizer; bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Seed of the stream owned by `trial`. Depends only on (master, trial), so
/// trials can be scheduled on any worker in any order.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t trial) noexcept {
    return mix64(mix64(master) ^ mix64(trial + 0x632BE59BD9B4E019ULL));
}

inline Engine make_engine(std::uint64_t seed) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
    return Engine(seq);
}

}  // namespace gaplab
