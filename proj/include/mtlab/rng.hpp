#pragma once

#include <cstdint>

namespace mtlab {

// Seed mixing and generation are hand-rolled so that streams are bit-for-bit
// reproducible across platforms and standard library versions (the
// std::uniform_* distributions are implementation defined).

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Counter-split seed derivation: child streams are indexed by a counter so
// trial seeds do not depend on execution order or thread count.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t counter) {
    std::uint64_t s = master ^ (0x9e3779b97f4a7c15ULL * (counter + 1));
    std::uint64_t a = splitmix64(s);
    std::uint64_t b = splitmix64(s);
    return a ^ (b << 1);
}

// Fixed stream tags for the independent random streams hanging off one trial
// seed (weight sampling, eigensolver start vectors, ...).
namespace stream {
inline constexpr std::uint64_t kWeight = 0x57454947u;    // weight sampling
inline constexpr std::uint64_t kStartVec = 0x53545254u;  // power-iteration start
inline constexpr std::uint64_t kTail = 0x5441494cu;      // tail-study batches
inline constexpr std::uint64_t kSample = 0x53414d50u;    // generic sample draws
}  // namespace stream

// xoshiro256** by Blackman & Vigna; small, fast, and fully specified.
class Xoshiro256 {
  public:
    explicit Xoshiro256(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& w : s_) w = splitmix64(sm);
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

    // Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    bool bernoulli(double p) { return uniform() < p; }

    // Unbiased integer in [0, n) by rejection.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t threshold = -n % n;  // = 2^64 mod n
        for (;;) {
            const std::uint64_t r = next();
            if (r >= threshold) return r % n;
        }
    }

  private:
    static std::uint64_t rotl(std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }
    std::uint64_t s_[4];
};

}  // namespace mtlab
