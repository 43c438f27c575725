#pragma once

#include <cstdint>
#include <random>

namespace dosx {

/// SplitMix64 finalizer; used to derive per-sample keys.
constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Random stream keyed by (master seed, sample index). Two streams with the same key
/// produce identical sequences regardless of which thread or in which order they run.
class RandomStream {
public:
    RandomStream(std::uint64_t master_seed, std::uint64_t index)
        : engine_(mix64(master_seed ^ mix64(index ^ 0xd1b54a32d192ed03ULL))) {}

    std::uint64_t next_u64() { return engine_(); }
    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return double(engine_() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 engine_;
};

} // namespace dosx
