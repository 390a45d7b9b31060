#pragma once

#include <concepts>
#include <cstdint>
#include <limits>
#include <random>

namespace aqil {

/// The single random stream type used throughout training and evaluation.
using Rng = std::mt19937_64;

/// Generators with a full 64-bit output range. The mappings below are written
/// out by hand so a given seed yields the same numbers with every standard
/// library, which `std::uniform_*_distribution` does not promise.
template <typename G>
concept FullRangeGenerator = std::uniform_random_bit_generator<G> && G::min() == 0 &&
                             G::max() == std::numeric_limits<std::uint64_t>::max();

/// Uniform draw in [0, 1) with 53 bits of resolution.
template <FullRangeGenerator G>
double uniform01(G& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

template <FullRangeGenerator G>
double uniform(G& gen, double lo, double hi) {
    return lo + (hi - lo) * uniform01(gen);
}

/// Uniform index in [0, n) by rejection, so there is no modulo bias.
template <FullRangeGenerator G>
std::uint64_t uniform_index(G& gen, std::uint64_t n) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t draw = gen();
    while (draw >= limit) draw = gen();
    return draw % n;
}

}  // namespace aqil
