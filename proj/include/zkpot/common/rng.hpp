#pragma once

#include <cmath>
#include <cstdint>

namespace zkpot {

// xoshiro256** seeded through splitmix64. Self-contained so that seeded runs
// reproduce bit-identically regardless of the standard library build.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed) {
        std::uint64_t x = seed;
        for (auto& s : state_) s = splitmix(x);
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

    // Unbiased integer in [0, n).
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            std::uint64_t v = next();
            if (v >= threshold) return v % n;
        }
    }

    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1, u2;
        do {
            u1 = unit();
        } while (u1 <= 1e-300);
        u2 = unit();
        const double mag = std::sqrt(-2.0 * std::log(u1));
        spare_ = mag * std::sin(6.283185307179586 * u2);
        have_spare_ = true;
        return mag * std::cos(6.283185307179586 * u2);
    }

    // Independent deterministic stream, stable under the order in which other
    // draws happen on this generator.
    Rng derive(std::uint64_t tag) const {
        std::uint64_t x = seed_ ^ (0x9E3779B97F4A7C15ULL + tag * 0xBF58476D1CE4E5B9ULL);
        x = splitmix(x);
        return Rng(x ^ tag);
    }

    std::uint64_t seed() const { return seed_; }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    static std::uint64_t splitmix(std::uint64_t& x) {
        std::uint64_t z = (x += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t seed_;
    std::uint64_t state_[4];
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace zkpot
