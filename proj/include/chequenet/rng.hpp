#pragma once

#include <cstdint>

namespace chequenet::detail {

// splitmix64: tiny, fast, and identical on every platform. All randomized
// code in the library draws from this so that a seed pins the output bytes.
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, bound) without modulo bias (Lemire rejection).
    std::uint64_t next_below(std::uint64_t bound) {
        if (bound == 0) return 0;
        std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            std::uint64_t r = next();
            if (r >= threshold) return r % bound;
        }
    }

    // Uniform in [lo, hi] inclusive.
    std::int64_t next_in(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(
                        next_below(static_cast<std::uint64_t>(hi - lo) + 1));
    }

    // Uniform double in [0, 1). Exact power-of-two scaling, so the value is
    // a deterministic function of the integer draw.
    double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

// Independent stream addressed by (seed, index); lets parallel or restarted
// consumers reproduce draw i without replaying draws 0..i-1.
inline SplitMix64 stream_at(std::uint64_t seed, std::uint64_t index) {
    SplitMix64 mixer(seed ^ (0x632be59bd9b4e019ULL * (index + 1)));
    return SplitMix64(mixer.next());
}

} // namespace chequenet::detail
