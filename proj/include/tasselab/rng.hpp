#pragma once

#include <cstdint>
#include <limits>
#include <vector>

// Deterministic random number generation. Every stochastic component of the
// library draws from the generators defined here, so datasets, trainings and
// simulations are reproducible bit-for-bit from their seeds. The algorithms
// are fixed by name so results can be replicated outside this codebase:
//
//   - seeding/stream derivation: splitmix64 (Steele, Lea, Flood 2014)
//   - main generator: xoshiro256** 1.0 (Blackman, Vigna 2018)
//   - bounded integers: rejection from the top ("OpenBSD" scheme), unbiased
//   - unit doubles: top 53 bits of one output, i.e. (x >> 11) * 2^-53

namespace tasselab {

inline constexpr std::uint64_t splitmix64_next(std::uint64_t& state) noexcept {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Stream derivation used wherever work is split into independent replicas
// (permutation runs, Monte Carlo trials): splitmix64 applied once to
// (master XOR index). Replica results are then independent of scheduling.
inline constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
    std::uint64_t s = master ^ index;
    return splitmix64_next(s);
}

class Xoshiro256ss {
public:
    using result_type = std::uint64_t;

    explicit constexpr Xoshiro256ss(std::uint64_t seed) noexcept {
        std::uint64_t sm = seed;
        for (auto& word : state_) word = splitmix64_next(sm);
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    constexpr result_type operator()() noexcept {
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

    // Unbiased integer in [0, bound). Rejects outputs below 2^64 mod bound so
    // the accepted range is an exact multiple of bound.
    constexpr std::uint64_t below(std::uint64_t bound) noexcept {
        const std::uint64_t reject_below = (0 - bound) % bound;
        for (;;) {
            const std::uint64_t x = (*this)();
            if (x >= reject_below) return x % bound;
        }
    }

    // Uniform double in [0, 1) with 53 random bits.
    constexpr double unit() noexcept {
        return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
    }

    constexpr bool bernoulli(double p) noexcept { return unit() < p; }

    // Single fair bit (top bit of one output).
    constexpr int bit() noexcept { return static_cast<int>((*this)() >> 63); }

    // Uniform double in [-half_width, half_width).
    constexpr double symmetric(double half_width) noexcept {
        return (2.0 * unit() - 1.0) * half_width;
    }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t state_[4]{};
};

// Fisher-Yates shuffle driven by Xoshiro256ss::below.
template <typename T>
inline void shuffle(std::vector<T>& values, Xoshiro256ss& rng) {
    for (std::size_t i = values.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng.below(i));
        std::swap(values[i - 1], values[j]);
    }
}

}  // namespace tasselab
