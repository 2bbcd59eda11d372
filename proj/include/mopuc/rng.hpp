#pragma once

#include <cstdint>

namespace mopuc {

// Deterministic 64-bit generator (splitmix64). Used everywhere a --seed is
// honored so identical seeds give byte-identical output across platforms;
// std::uniform_* distributions are implementation-defined and would not.
struct SplitMix64 {
    uint64_t state;

    explicit SplitMix64(uint64_t seed) : state(seed) {}

    uint64_t next() {
        state += 0x9E3779B97F4A7C15ull;
        uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, bound); modulo bias is irrelevant at the sizes used here.
    uint64_t below(uint64_t bound) { return next() % bound; }

    long range(long lo, long hi) {  // inclusive
        return lo + static_cast<long>(below(static_cast<uint64_t>(hi - lo + 1)));
    }

    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

}  // namespace mopuc
