#pragma once

#include <cstdint>

namespace feedwalk {

// splitmix64: seed expander and stream-key mixer.
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
};

// xoshiro256**: the walk's sole random source. Seeded through splitmix64 so
// that any 64-bit seed yields a well-mixed state.
class Xoshiro256StarStar {
public:
    explicit Xoshiro256StarStar(std::uint64_t seed) {
        SplitMix64 sm(seed);
        for (auto& w : s_) w = sm.next();
        if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform on [0,1) with 53-bit resolution.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t s_[4];
};

// Derives an independent stream key from a base seed and up to two tags
// (replicate index, site index, ...). Distinct tags give distinct keys.
inline std::uint64_t derive_stream(std::uint64_t base, std::uint64_t tag_a,
                                   std::uint64_t tag_b = 0) {
    SplitMix64 sm(base);
    std::uint64_t k = sm.next();
    sm.state = k ^ (tag_a * 0x9E3779B97F4A7C15ULL);
    k = sm.next();
    sm.state = k ^ (tag_b * 0xD1B54A32D192ED03ULL);
    return sm.next();
}

}  // namespace feedwalk
