#pragma once

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace robust {

/// Engine used for every randomized operation.
using Rng = std::mt19937_64;

/// SplitMix64 finalizer.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Folds a list of 64-bit keys into one seed: h = splitmix64(h ^ key) for
/// each key in order, starting from h = 0.
constexpr std::uint64_t mix_keys(std::initializer_list<std::uint64_t> keys) noexcept
{
    std::uint64_t h = 0;
    for (std::uint64_t key : keys) {
        h = splitmix64(h ^ key);
    }
    return h;
}

/// Key for a real-valued coordinate (its IEEE-754 bit pattern; -0.0 maps to 0.0).
inline std::uint64_t key_of(double value) noexcept
{
    return std::bit_cast<std::uint64_t>(value == 0.0 ? 0.0 : value);
}

/// Uniform double in [0, 1) from the top 53 bits of a 64-bit word.
constexpr double unit_interval(std::uint64_t bits) noexcept
{
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

}  // namespace robust
