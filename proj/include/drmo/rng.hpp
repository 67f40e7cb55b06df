#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace drmo {

/// SplitMix64: a 64-bit counter-based generator.
///
/// The state is a counter advanced by the golden-ratio increment
/// 0x9E3779B97F4A7C15; each output is the counter passed through the
/// finalizer (xor-shift 30, mul 0xBF58476D1CE4E5B9, xor-shift 27,
/// mul 0x94D049BB133111EB, xor-shift 31). Doubles take the top 53 bits.
/// The algorithm is pinned so that verification batteries draw identical
/// streams in any implementation.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 42) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n). Modulo bias is irrelevant at the sizes used here.
    std::size_t index(std::size_t n) { return static_cast<std::size_t>(next_u64() % n); }

    /// Uniform integer in [lo, hi].
    std::size_t between(std::size_t lo, std::size_t hi) { return lo + index(hi - lo + 1); }

    bool coin(double p = 0.5) { return uniform() < p; }

    /// Derive an independent stream, e.g. one per battery.
    Rng fork() { return Rng(next_u64()); }

private:
    std::uint64_t state_;
};

}  // namespace drmo
