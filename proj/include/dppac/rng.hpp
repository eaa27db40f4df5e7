#pragma once
// SplitMix64 generator. All randomized routines in the library draw from this
// so that a (seed, call-sequence) pair reproduces bit-identically across
// platforms; std:: distributions are implementation-defined and not used.

#include <cstdint>
#include <cmath>

namespace dppac {

struct Rng {
    std::uint64_t state;

    explicit Rng(std::uint64_t seed) : state(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform in [0,1) with 53 random bits.
    double next_unit() { return double(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in {0, ..., n-1} by rejection; unbiased for every n.
    std::uint64_t next_below(std::uint64_t n) {
        std::uint64_t lim = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do { x = next_u64(); } while (x >= lim);
        return x % n;
    }

    bool next_bool() { return next_u64() >> 63; }

    // Independent child stream: distinct tags give decorrelated sequences, so
    // one run's draw counts cannot perturb another component's stream.
    Rng child(std::uint64_t tag) {
        std::uint64_t z = state ^ (0xd1342543de82ef95ull * (tag + 1));
        z = (z ^ (z >> 29)) * 0xff51afd7ed558ccdull;
        z = (z ^ (z >> 32)) * 0xc4ceb9fe1a85ec53ull;
        return Rng(z ^ (z >> 29));
    }
};

}  // namespace dppac
