#include <cmath>
#include <complex>
#include <numbers>

#include "doctest.h"
#include "krom/errors.hpp"
#include "krom/metrics.hpp"
#include "krom/rng.hpp"

using namespace krom;
using cd = std::complex<double>;

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

TEST_CASE("geodesic error closed forms") {
    const Eigen::VectorXd zeros = Eigen::VectorXd::Zero(4);
    CHECK(geodesic_error(zeros, zeros, kTwoPi) == 0.0);

    // Antipodal: each chord has length 2, so (1/4)*sqrt(4*4) = 1.
    const Eigen::VectorXd pis = Eigen::VectorXd::Constant(4, std::numbers::pi);
    CHECK(geodesic_error(zeros, pis, kTwoPi) == doctest::Approx(1.0).epsilon(1e-14));

    // Single point near the seam: |1 - e^{-0.1i}|.
    Eigen::VectorXd a(1), b(1);
    a << 0.0;
    b << kTwoPi - 0.1;
    const double chord = std::abs(1.0 - std::exp(cd{0.0, -0.1}));
    CHECK(geodesic_error(a, b, kTwoPi) == doctest::Approx(chord).epsilon(1e-12));
    CHECK(chord == doctest::Approx(0.099958).epsilon(1e-4));

    // Other periods map through 2*pi/period.
    Eigen::VectorXd c(1), d(1);
    c << 0.0;
    d << 0.5;
    CHECK(geodesic_error(c, d, 1.0) == doctest::Approx(2.0).epsilon(1e-14));

    CHECK_THROWS_AS(geodesic_error(a, zeros, kTwoPi), ConfigError);
    CHECK_THROWS_AS(geodesic_error(Eigen::VectorXd(), Eigen::VectorXd(), kTwoPi), ConfigError);
}

TEST_CASE("geodesic error is symmetric and positive definite mod period") {
    Rng rng(3);
    Eigen::VectorXd a(30), b(30);
    for (int i = 0; i < 30; ++i) {
        a(i) = rng.uniform(0.0, kTwoPi);
        b(i) = rng.uniform(0.0, kTwoPi);
    }
    CHECK(geodesic_error(a, b, kTwoPi) == doctest::Approx(geodesic_error(b, a, kTwoPi)).epsilon(1e-14));
    CHECK(geodesic_error(a, b, kTwoPi) > 0.0);

    // Shifting one trace by a full period is invisible.
    const Eigen::VectorXd shifted = b.array() + kTwoPi;
    CHECK(geodesic_error(a, shifted, kTwoPi) == doctest::Approx(geodesic_error(a, b, kTwoPi)).epsilon(1e-11));
    CHECK(geodesic_error(b, shifted, kTwoPi) < 1e-12);
}

TEST_CASE("euclidean error mirrors the angular normalization") {
    Eigen::VectorXcd x(4), y(4);
    x.setZero();
    y.setConstant(cd{2.0, 0.0});
    CHECK(euclidean_error(x, y) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(euclidean_error(x, x) == 0.0);
    CHECK_THROWS_AS(euclidean_error(x, Eigen::VectorXcd::Zero(3)), ConfigError);
}

TEST_CASE("true geodesic takes the shorter arc") {
    CHECK(true_geodesic(0.0, kTwoPi - 0.1, kTwoPi) == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(true_geodesic(1.3, 1.3, kTwoPi) == 0.0);
    CHECK(true_geodesic(0.0, std::numbers::pi, kTwoPi) ==
          doctest::Approx(std::numbers::pi).epsilon(1e-14));
    CHECK(true_geodesic(0.05, 0.95, 1.0) == doctest::Approx(0.1).epsilon(1e-12));
    // Inputs outside [0, period) are reduced first.
    CHECK(true_geodesic(-0.05, 0.05, 1.0) == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(true_geodesic(7.0, 0.0, 1.0) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("true geodesic never exceeds half the period and respects triangles") {
    Rng rng(8);
    for (int trial = 0; trial < 200; ++trial) {
        const double a = rng.uniform(-10.0, 10.0);
        const double b = rng.uniform(-10.0, 10.0);
        const double c = rng.uniform(-10.0, 10.0);
        const double ab = true_geodesic(a, b, kTwoPi);
        const double bc = true_geodesic(b, c, kTwoPi);
        const double ac = true_geodesic(a, c, kTwoPi);
        CHECK(ab <= kTwoPi / 2 + 1e-12);
        CHECK(ac <= ab + bc + 1e-12);
    }
}

TEST_CASE("residence time counts the half-open window") {
    Eigen::VectorXd theta(10), phi(10);
    for (int i = 0; i < 10; ++i) {
        theta(i) = 1.0;
        phi(i) = 1.0 + (i % 2 == 0 ? 0.05 : 0.3);
    }
    CHECK(residence_time(theta, phi, 0.05, kTwoPi) == doctest::Approx(0.5));

    CHECK(residence_time(theta, theta, 0.01, kTwoPi) == 1.0);
    CHECK(residence_time(theta, theta, 0.0, kTwoPi) == 0.0);  // [0,0) is empty
    CHECK_THROWS_AS(residence_time(theta, Eigen::VectorXd::Zero(9), 0.1, kTwoPi), ConfigError);
}

TEST_CASE("residence time is nondecreasing in sigma") {
    Rng rng(14);
    Eigen::VectorXd theta(50), phi(50);
    for (int i = 0; i < 50; ++i) {
        theta(i) = rng.uniform(0.0, kTwoPi);
        phi(i) = rng.uniform(0.0, kTwoPi);
    }
    double prev = 0.0;
    for (double sigma : {0.0, 0.05, 0.2, 0.5, 1.0, 2.0, 4.0}) {
        const double f = residence_time(theta, phi, sigma, kTwoPi);
        CHECK(f >= prev);
        CHECK(f >= 0.0);
        CHECK(f <= 1.0);
        prev = f;
    }
    CHECK(prev == 1.0);  // 2*sigma beyond period/2 captures everything
}

TEST_CASE("linear residence counts absolute offsets") {
    Eigen::VectorXd x(4), y(4);
    x.setZero();
    y << 0.1, 0.5, 0.1, 0.5;
    CHECK(residence_time_linear(x, y, 0.1) == doctest::Approx(0.5));
    CHECK(residence_time_linear(x, x, 0.5) == 1.0);
    const Eigen::VectorXd off = Eigen::VectorXd::Constant(4, 0.3);
    CHECK(residence_time_linear(x, off, 0.1) == 0.0);
    CHECK_THROWS_AS(residence_time_linear(x, Eigen::VectorXd::Zero(3), 0.1), ConfigError);
}

TEST_CASE("eigenvalue discrepancy averages nearest distances") {
    Eigen::VectorXcd truth(2), computed(2);
    truth << cd{1.0, 0.0}, cd{0.0, 1.0};
    computed << cd{0.95, 0.0}, cd{0.0, 1.05};
    CHECK(eigenvalue_discrepancy(truth, computed) == doctest::Approx(0.05).epsilon(1e-12));

    Eigen::VectorXcd single_t(1), single_c(1);
    single_t << cd{1.0, 0.0};
    single_c << cd{1.0, 0.1};
    CHECK(eigenvalue_discrepancy(single_t, single_c) == doctest::Approx(0.1).epsilon(1e-12));

    CHECK(eigenvalue_discrepancy(truth, truth) == 0.0);

    // Directed: every computed value finds its nearest truth, sets may differ
    // in cardinality.
    Eigen::VectorXcd many(3);
    many << cd{1.0, 0.0}, cd{1.0, 0.0}, cd{0.0, 1.0};
    CHECK(eigenvalue_discrepancy(truth, many) == 0.0);

    CHECK_THROWS_AS(eigenvalue_discrepancy(Eigen::VectorXcd(), computed), ConfigError);
    CHECK_THROWS_AS(eigenvalue_discrepancy(truth, Eigen::VectorXcd()), ConfigError);
}
