#pragma once

#include <cstdint>
#include <random>

namespace pyro {

/// Seedable 64-bit generator (mt19937_64) with portable derived draws.
/// std::distribution objects are implementation-defined, so uniform doubles
/// and bounded integers are derived from raw 64-bit words directly; identical
/// seeds give identical streams on any conforming platform.
class Rng {
public:
    explicit Rng(uint64_t seed) : gen_(seed) {}

    /// Uniform double in [0, 1) with 53 random mantissa bits.
    double uniform01() { return double(gen_() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n). Rejection sampling, bias-free.
    uint64_t below(uint64_t n) {
        const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        uint64_t x;
        do {
            x = gen_();
        } while (x >= limit);
        return x % n;
    }

    uint64_t raw() { return gen_(); }

private:
    std::mt19937_64 gen_;
};

}  // namespace pyro
