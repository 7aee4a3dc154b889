#pragma once

#include <cstdint>

namespace dyadic {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Counter-based generator: the value of draw `counter` depends only on
/// (seed, stream, counter), so any partition of the draws across workers
/// reproduces the serial sequence.
class CounterRng {
public:
    constexpr CounterRng(std::uint64_t seed, std::uint64_t stream)
        : key_(mix64(mix64(seed + 0x9e3779b97f4a7c15ULL) ^ (stream * 0xd1b54a32d192ed03ULL + 1))) {}

    constexpr std::uint64_t operator()(std::uint64_t counter) const {
        return mix64(key_ + (counter + 1) * 0x9e3779b97f4a7c15ULL);
    }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform(std::uint64_t counter) const {
        return static_cast<double>((*this)(counter) >> 11) * 0x1.0p-53;
    }

private:
    std::uint64_t key_;
};

} // namespace dyadic
