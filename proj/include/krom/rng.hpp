#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

namespace krom {

// Seeded xoshiro256++ generator with splitmix64 state expansion.
//
// Every stochastic ingredient of a simulation draws from its own substream,
// derived from (seed, stream) by a fixed affine step on the splitmix64 state.
// The algorithm is fully specified here so that runs are reproducible across
// platforms and so an independent implementation (see tests/oracles) can
// regenerate identical sequences.
class Rng {
public:
    static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) {
        std::uint64_t sm = seed + stream * kGolden;
        for (auto& word : state_) word = splitmix64(sm);
        if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform on [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + uniform01() * (hi - lo); }

    // Box-Muller; consumes exactly two uniforms per call.
    double normal(double mean = 0.0, double stddev = 1.0) {
        const double u1 = 1.0 - uniform01();  // (0, 1], keeps log finite
        const double u2 = uniform01();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        return mean + stddev * radius * std::cos(2.0 * std::numbers::pi * u2);
    }

    // Inverse-CDF exponential with the given rate (mean 1/rate).
    double exponential(double rate) { return -std::log(1.0 - uniform01()) / rate; }

    // Integer in [0, n). The clamp guards the u*n == n rounding corner.
    int below(int n) {
        int k = static_cast<int>(uniform01() * static_cast<double>(n));
        return k < n ? k : n - 1;
    }

    // Fisher-Yates shuffle of (0, 1, ..., n-1).
    std::vector<int> permutation(int n) {
        std::vector<int> p(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = i;
        for (int i = n - 1; i > 0; --i) {
            const int j = below(i + 1);
            std::swap(p[static_cast<std::size_t>(i)], p[static_cast<std::size_t>(j)]);
        }
        return p;
    }

private:
    static std::uint64_t splitmix64(std::uint64_t& s) {
        std::uint64_t z = (s += kGolden);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t state_[4];
};

}  // namespace krom
