#ifndef COOPFIELD_RNG_HPP
#define COOPFIELD_RNG_HPP

#include <cstdint>

namespace coopfield {

// splitmix64 step (Steele, Lea, Flood 2014). Used to expand seeds and to
// derive independent streams; never used as the sampling generator itself.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Stream-splitting rule: seed_i = splitmix64(seed XOR (i+1)*golden).
// The +1 keeps stream 0 distinct from the raw seed.
inline std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t s = seed ^ ((index + 1) * 0x9e3779b97f4a7c15ull);
    return splitmix64_next(s);
}

// xoshiro256** 1.0 (Blackman, Vigna). Fully specified, so runs are
// bit-identical across platforms; state seeded through splitmix64.
class Xoshiro256 {
public:
    explicit Xoshiro256(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : state_) word = splitmix64_next(sm);
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform double in [0, 1) from the top 53 bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform index in [0, n) via 128-bit multiply-shift (fixed algorithm, so
    // sequences are platform independent; bias of order n/2^64 is negligible).
    std::uint64_t uniform_index(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next()) * n) >> 64);
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    std::uint64_t state_[4];
};

}  // namespace coopfield

#endif
