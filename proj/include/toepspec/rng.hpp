#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

#include "toepspec/matrix.hpp"

namespace toepspec {

/// SplitMix64 finalizer.
[[nodiscard]] constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Child seed for a labelled sub-stream, e.g. derive_seed(seed, trial, size).
[[nodiscard]] constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a,
                                                  std::uint64_t b = 0) noexcept {
    return mix64(mix64(seed ^ mix64(a + 0x632be59bd9b4e019ULL)) ^ mix64(b + 0x8cb92ba72f3d8dd7ULL));
}

/// Counter-based generator: draw `i` depends only on (key, i), so entries can
/// be sampled in any order or from any thread with identical results.
class CounterRng {
public:
    explicit constexpr CounterRng(std::uint64_t key) noexcept : key_(mix64(key)) {}

    [[nodiscard]] constexpr std::uint64_t bits(std::uint64_t i) const noexcept {
        return mix64(key_ ^ mix64(i * 0xd1b54a32d192ed03ULL + 1));
    }

    /// Uniform on the open interval (0, 1).
    [[nodiscard]] constexpr double uniform(std::uint64_t i) const noexcept {
        return (static_cast<double>(bits(i) >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller on draws 2i and 2i+1.
    [[nodiscard]] double normal(std::uint64_t i) const noexcept {
        const double u1 = uniform(2 * i);
        const double u2 = uniform(2 * i + 1);
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    /// Complex normal with independent parts of variance 1/2 each.
    [[nodiscard]] Complex complex_normal(std::uint64_t i) const noexcept {
        constexpr double kHalfRoot = 0.70710678118654752440;
        return {kHalfRoot * normal(2 * i), kHalfRoot * normal(2 * i + 1)};
    }

private:
    std::uint64_t key_;
};

}  // namespace toepspec
