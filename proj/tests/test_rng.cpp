#include <cmath>
#include <cstdint>
#include <vector>

#include "doctest.h"
#include "krom/rng.hpp"

using krom::Rng;

// Reference values frozen from the independent python mirror
// (tests/oracles/rng_mirror.py), which implements splitmix64 and
// xoshiro256++ from their published definitions.
TEST_CASE("raw u64 stream matches the cross-language reference") {
    Rng rng(42, 0);
    CHECK(rng.next_u64() == 15021278609987233951ull);
    CHECK(rng.next_u64() == 5881210131331364753ull);
    CHECK(rng.next_u64() == 18149643915985481100ull);
    CHECK(rng.next_u64() == 12933668939759105464ull);
}

TEST_CASE("uniform01 matches the reference bit for bit") {
    Rng rng(42, 0);
    CHECK(rng.uniform01() == 0x1.a0ec9a9e88ecdp-1);
    CHECK(rng.uniform01() == 0x1.467905d15dbccp-2);
    CHECK(rng.uniform01() == 0x1.f7c0f9f61849dp-1);
    CHECK(rng.uniform01() == 0x1.66fb3ec019b06p-1);
}

TEST_CASE("normal and exponential draws match the reference bit for bit") {
    Rng normal_rng(42, 1);
    CHECK(normal_rng.normal() == -0x1.204f080f93f17p+1);
    CHECK(normal_rng.normal() == 0x1.1f673468b4b9ap-2);
    CHECK(normal_rng.normal() == -0x1.7cc7850ccd402p+0);

    Rng exp_rng(42, 2);
    CHECK(exp_rng.exponential(1.0) == 0x1.62b5b5030a577p+1);
    CHECK(exp_rng.exponential(1.0) == 0x1.aab9411212461p+0);
    CHECK(exp_rng.exponential(1.0) == 0x1.fe33689755e48p-2);
}

TEST_CASE("permutation matches the reference") {
    Rng rng(7, 5);
    CHECK(rng.permutation(8) == std::vector<int>{2, 4, 0, 3, 5, 1, 7, 6});
}

TEST_CASE("identical seeds reproduce, different streams do not") {
    Rng a(123, 4), b(123, 4), c(123, 5);
    bool all_equal = true, any_diff = false;
    for (int i = 0; i < 100; ++i) {
        const std::uint64_t va = a.next_u64();
        all_equal = all_equal && va == b.next_u64();
        any_diff = any_diff || va != c.next_u64();
    }
    CHECK(all_equal);
    CHECK(any_diff);
}

TEST_CASE("distribution moments come out right") {
    Rng rng(2024, 0);
    const int n = 200000;
    double sum = 0.0, sumsq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double v = rng.normal(1.0, 0.5);
        sum += v;
        sumsq += v * v;
    }
    const double mean = sum / n;
    const double var = sumsq / n - mean * mean;
    CHECK(mean == doctest::Approx(1.0).epsilon(0.01));
    CHECK(std::sqrt(var) == doctest::Approx(0.5).epsilon(0.01));

    Rng exp_rng(2024, 1);
    double esum = 0.0;
    for (int i = 0; i < n; ++i) esum += exp_rng.exponential(2.0);
    CHECK(esum / n == doctest::Approx(0.5).epsilon(0.015));
}

TEST_CASE("permutation is uniform enough and always a bijection") {
    Rng rng(9, 9);
    std::vector<int> first_counts(5, 0);
    for (int trial = 0; trial < 5000; ++trial) {
        const auto p = rng.permutation(5);
        std::vector<bool> seen(5, false);
        for (int v : p) {
            REQUIRE(v >= 0);
            REQUIRE(v < 5);
            REQUIRE(!seen[static_cast<std::size_t>(v)]);
            seen[static_cast<std::size_t>(v)] = true;
        }
        ++first_counts[static_cast<std::size_t>(p[0])];
    }
    for (int c : first_counts) CHECK(std::abs(c - 1000) < 150);
}
