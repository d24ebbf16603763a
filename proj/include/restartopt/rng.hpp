#pragma once

#include <cstdint>
#include <random>

namespace restartopt {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Seedable, portable uniform source. mt19937_64 output is pinned by the
// standard and the [0,1) conversion below avoids the implementation-defined
// std::uniform_real_distribution, so streams are identical across platforms.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t s = seed;
        gen_.seed(splitmix64(s));
    }

    // Substream k of a run seed; used for per-trajectory and per-batch streams.
    static Rng substream(std::uint64_t seed, std::uint64_t k) {
        std::uint64_t s = seed + 0x9e3779b97f4a7c15ULL * (k + 1);
        return Rng(splitmix64(s));
    }

    std::uint64_t next_u64() { return gen_(); }

    // Uniform double in [0,1), 53 random bits.
    double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, n), unbiased via rejection.
    std::uint64_t uniform_int(std::uint64_t n) {
        const std::uint64_t limit = ~0ULL - ~0ULL % n;
        std::uint64_t v;
        do {
            v = gen_();
        } while (v >= limit);
        return v % n;
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace restartopt
