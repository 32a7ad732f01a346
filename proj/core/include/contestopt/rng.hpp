#pragma once

#include <cstdint>

namespace contestopt {

// SplitMix64, used to derive per-stream seeds.
inline uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// xoshiro256++ (Blackman/Vigna). Bit-stable across platforms; the seed ->
// sample mapping is part of the reproducibility contract.
//
// Stream split rule: stream(seed, k) seeds the generator with four SplitMix64
// outputs drawn from state seed ^ (k+1)*0x9E3779B97F4A7C15. Player/chunk index
// k gets its own stream; results are combined in index order.
class Xoshiro256 {
public:
    explicit Xoshiro256(uint64_t seed, uint64_t stream = 0) {
        uint64_t sm = seed ^ ((stream + 1) * 0x9E3779B97F4A7C15ULL);
        for (auto& w : s_) w = splitmix64(sm);
    }

    uint64_t next_u64() {
        const uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform double in [0,1) from the top 53 bits (portable; we do not use
    // std::uniform_real_distribution, which is implementation-defined).
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

private:
    static uint64_t rotl(uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    uint64_t s_[4];
};

}  // namespace contestopt
