#pragma once

#include <cstdint>

namespace rbfqf {

/// Counter-based SplitMix64 stream (Steele, Lea, Flood 2014 finalizer).
///
/// Draw i of stream `seed` is mix(seed + (i + 1) * 0x9E3779B97F4A7C15), so
/// any element can be computed independently and prefixes of a stream nest.
/// Uniform doubles use the top 53 bits: (x >> 11) * 2^-53, a value in [0, 1).
class CounterRng {
public:
    static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;
    static constexpr std::uint64_t kMul1 = 0xBF58476D1CE4E5B9ULL;
    static constexpr std::uint64_t kMul2 = 0x94D049BB133111EBULL;

    explicit constexpr CounterRng(std::uint64_t seed) noexcept : seed_(seed) {}

    static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
        z = (z ^ (z >> 30)) * kMul1;
        z = (z ^ (z >> 27)) * kMul2;
        return z ^ (z >> 31);
    }

    constexpr std::uint64_t bits(std::uint64_t counter) const noexcept {
        return mix(seed_ + (counter + 1) * kGamma);
    }

    constexpr double uniform(std::uint64_t counter) const noexcept {
        return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
    }

    constexpr std::uint64_t seed() const noexcept { return seed_; }

private:
    std::uint64_t seed_;
};

/// Derives an independent stream seed for a labelled sub-task.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t label) noexcept {
    return CounterRng::mix(seed ^ CounterRng::mix(label + CounterRng::kGamma));
}

} // namespace rbfqf
