#include <cmath>
#include <complex>
#include <numbers>

#include "doctest.h"
#include "krom/errors.hpp"
#include "krom/kmd.hpp"
#include "krom/noise.hpp"
#include "krom/rng.hpp"
#include "krom/rom.hpp"

using namespace krom;
using cd = std::complex<double>;

namespace {

SnapshotMatrix modal_trajectory(const Eigen::MatrixXcd& modes, const Eigen::VectorXcd& eigs,
                                const Eigen::VectorXcd& coeffs, int n_t) {
    Eigen::MatrixXcd v(modes.rows(), n_t);
    Eigen::VectorXcd amp = coeffs;
    for (int t = 0; t < n_t; ++t) {
        v.col(t) = modes * amp;
        amp = amp.cwiseProduct(eigs);
    }
    return make_snapshots(std::move(v), 1.0);
}

KoopmanDecomposition handmade_decomposition(Eigen::MatrixXcd modes, Eigen::VectorXcd eigs) {
    KoopmanDecomposition d;
    d.raw_mode_norms = Eigen::VectorXd::Ones(modes.cols());
    for (Eigen::Index j = 0; j < modes.cols(); ++j) modes.col(j).normalize();
    d.modes = std::move(modes);
    d.eigenvalues = std::move(eigs);
    d.rank_used = static_cast<int>(d.modes.cols());
    d.source_meta.n_obs = static_cast<int>(d.modes.rows());
    d.source_meta.n_t = 2;
    d.source_meta.dt = 1.0;
    return d;
}

double windowed_error(const Eigen::VectorXcd& c, const KoopmanDecomposition& d,
                      const SnapshotMatrix& x, IndexRange w) {
    double err = 0.0;
    for (int t = w.begin; t < w.end; ++t) {
        Eigen::VectorXcd pred = Eigen::VectorXcd::Zero(d.modes.rows());
        for (Eigen::Index j = 0; j < d.mode_count(); ++j)
            pred += c(j) * cpow_int(d.eigenvalues(j), t) * d.modes.col(j);
        err += (x.values.col(t) - pred).squaredNorm();
    }
    return err;
}

}  // namespace

TEST_CASE("integer complex powers match repeated multiplication") {
    const cd z{0.9, 0.41};
    cd acc{1.0, 0.0};
    for (int t = 0; t <= 25; ++t) {
        CHECK(std::abs(cpow_int(z, t) - acc) <= 1e-13 * std::max(1.0, std::abs(acc)));
        acc *= z;
    }
    CHECK(cpow_int({0.0, 0.0}, 0) == cd{1.0, 0.0});
    CHECK(cpow_int({0.0, 0.0}, 5) == cd{0.0, 0.0});
}

TEST_CASE("single known mode yields its amplitude") {
    Eigen::MatrixXcd mode(3, 1);
    mode.col(0) << cd{0.6, 0.0}, cd{0.0, 0.8}, cd{0.0, 0.0};
    Eigen::VectorXcd eig(1);
    eig << std::polar(1.0, 0.7);
    Eigen::VectorXcd amp(1);
    amp << cd{2.0, 0.0};

    const SnapshotMatrix data = modal_trajectory(mode, eig, amp, 12);
    const KoopmanDecomposition d = handmade_decomposition(mode, eig);
    const ReducedOrderModel r = fit_coefficients(d, data, {0, 12});
    REQUIRE(r.coefficients.size() == 1);
    CHECK(std::abs(r.coefficients(0) - cd{2.0, 0.0}) < 1e-12);
}

TEST_CASE("known coefficients of an orthonormal three-mode system are recovered") {
    Eigen::MatrixXcd modes = Eigen::MatrixXcd::Zero(5, 3);
    modes(0, 0) = 1.0;
    modes(2, 1) = 1.0;
    modes(4, 2) = 1.0;
    Eigen::VectorXcd eigs(3);
    eigs << std::polar(1.0, 0.31), std::polar(1.0, -1.7), std::polar(1.0, 2.2);
    Eigen::VectorXcd truth(3);
    truth << cd{1.0, 0.0}, cd{0.5, -0.5}, cd{-2.0, 0.0};

    const SnapshotMatrix data = modal_trajectory(modes, eigs, truth, 50);
    const ReducedOrderModel r = fit_coefficients(handmade_decomposition(modes, eigs), data, {0, 50});
    CHECK((r.coefficients - truth).norm() < 1e-10);
    CHECK(r.train_window == IndexRange{0, 50});
    CHECK(r.dt == 1.0);
}

TEST_CASE("fit through full pipeline reproduces noise-free data") {
    Rng rng(17);
    Eigen::MatrixXcd modes(6, 4);
    for (int j = 0; j < 4; ++j)
        for (int i = 0; i < 6; ++i) modes(i, j) = {rng.normal(0.0, 1.0), rng.normal(0.0, 1.0)};
    Eigen::VectorXcd eigs(4);
    for (int j = 0; j < 4; ++j) eigs(j) = std::polar(rng.uniform(0.9, 1.02), rng.uniform(-2.5, 2.5));
    Eigen::VectorXcd amps(4);
    for (int j = 0; j < 4; ++j) amps(j) = {rng.uniform(0.5, 2.0), rng.uniform(-1.0, 1.0)};

    const SnapshotMatrix data = modal_trajectory(modes, eigs, amps, 60);
    const KoopmanDecomposition kd = compute_dmd(data);
    REQUIRE(kd.mode_count() == 4);
    const ReducedOrderModel r = fit_coefficients(kd, data, {0, 60});
    const SnapshotMatrix rec = reconstruct(r, {0, 60});
    CHECK((rec.values - data.values).norm() / data.values.norm() < 1e-8);
}

TEST_CASE("fitted coefficients are a local minimum of windowed error") {
    Rng rng(23);
    Eigen::MatrixXcd modes(5, 3);
    for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 5; ++i) modes(i, j) = {rng.normal(0.0, 1.0), rng.normal(0.0, 1.0)};
    Eigen::VectorXcd eigs(3);
    for (int j = 0; j < 3; ++j) eigs(j) = std::polar(rng.uniform(0.9, 1.05), rng.uniform(-2.0, 2.0));

    // Noisy data so the optimum is strict.
    Eigen::MatrixXcd v(5, 40);
    Eigen::VectorXcd amp = Eigen::VectorXcd::Ones(3);
    for (int t = 0; t < 40; ++t) {
        v.col(t) = modes * amp;
        for (int i = 0; i < 5; ++i) v(i, t) += cd{rng.normal(0.0, 0.1), rng.normal(0.0, 0.1)};
        amp = amp.cwiseProduct(eigs);
    }
    const SnapshotMatrix data = make_snapshots(v, 1.0);
    const KoopmanDecomposition d = handmade_decomposition(modes, eigs);
    const IndexRange w{0, 40};
    const ReducedOrderModel r = fit_coefficients(d, data, w);

    const double best = windowed_error(r.coefficients, d, data, w);
    for (int trial = 0; trial < 20; ++trial) {
        Eigen::VectorXcd delta(3);
        for (int j = 0; j < 3; ++j) delta(j) = {rng.normal(0.0, 1.0), rng.normal(0.0, 1.0)};
        delta *= 1e-3 / delta.norm();
        CHECK(windowed_error(r.coefficients + delta, d, data, w) >= best);
    }
}

TEST_CASE("underdetermined fits take the minimum-norm solution") {
    // Two identical modes with identical eigenvalues: any split of the
    // amplitude works, so the fit must pick the symmetric (min-norm) one.
    Eigen::MatrixXcd modes(3, 2);
    modes.col(0) << cd{1, 0}, cd{0, 0}, cd{0, 0};
    modes.col(1) = modes.col(0);
    Eigen::VectorXcd eigs(2);
    eigs << cd{0.9, 0.0}, cd{0.9, 0.0};

    Eigen::MatrixXcd v(3, 10);
    double a = 2.0;
    for (int t = 0; t < 10; ++t, a *= 0.9) v.col(t) << cd{a, 0}, cd{0, 0}, cd{0, 0};
    const SnapshotMatrix data = make_snapshots(v, 1.0);

    const ReducedOrderModel r = fit_coefficients(handmade_decomposition(modes, eigs), data, {0, 10});
    CHECK(std::abs(r.coefficients(0) - cd{1.0, 0.0}) < 1e-10);
    CHECK(std::abs(r.coefficients(1) - cd{1.0, 0.0}) < 1e-10);
}

TEST_CASE("training window is honored") {
    // Data follows lambda=0.5 for t<6 and is garbage afterwards: fitting on
    // [0,6) must ignore the garbage.
    Eigen::MatrixXcd mode(2, 1);
    mode.col(0) << cd{1, 0}, cd{0, 0};
    Eigen::VectorXcd eig(1);
    eig << cd{0.5, 0.0};

    Eigen::MatrixXcd v = Eigen::MatrixXcd::Constant(2, 12, cd{99.0, -99.0});
    double x = 3.0;
    for (int t = 0; t < 6; ++t, x *= 0.5) v.col(t) << cd{x, 0}, cd{0, 0};
    const SnapshotMatrix data = make_snapshots(v, 1.0);

    const ReducedOrderModel r = fit_coefficients(handmade_decomposition(mode, eig), data, {0, 6});
    CHECK(std::abs(r.coefficients(0) - cd{3.0, 0.0}) < 1e-12);
}

TEST_CASE("reconstruct evaluates the closed form") {
    Eigen::MatrixXcd mode(2, 1);
    mode.col(0) << cd{1, 0}, cd{0, 0};
    Eigen::VectorXcd eig(1);
    const double omega = 0.25;
    eig << std::polar(1.0, omega);

    KoopmanDecomposition d = handmade_decomposition(mode, eig);
    ReducedOrderModel r;
    r.decomposition = d;
    r.coefficients = Eigen::VectorXcd::Ones(1);
    r.train_window = {0, 2};
    r.dt = 1.0;

    const SnapshotMatrix rec = reconstruct(r, {0, 30});
    REQUIRE(rec.n_t() == 30);
    for (int t = 0; t < 30; ++t) {
        CHECK(std::abs(rec.values(0, t) - std::polar(1.0, omega * t)) < 1e-12);
        CHECK(std::abs(rec.values(1, t)) < 1e-15);
    }
    // Rotation trace is bounded by sum |c_j|.
    for (int t = 0; t < 30; ++t) CHECK(rec.values.col(t).norm() <= 1.0 + 1e-12);
}

TEST_CASE("reconstruct carries source metadata and global time") {
    Rng rng(3);
    Eigen::MatrixXcd v(2, 20);
    for (int k = 0; k < 20; ++k)
        for (int i = 0; i < 2; ++i) v(i, k) = {rng.normal(0.0, 1.0), rng.normal(0.0, 1.0)};
    SnapshotMatrix data = make_snapshots(v, 0.25, 7.0, {"u", "w"});
    const KoopmanDecomposition kd = compute_dmd(data);
    const ReducedOrderModel r = fit_coefficients(kd, data, {0, 20});

    const SnapshotMatrix rec = reconstruct(r, {5, 15});
    CHECK(rec.dt == 0.25);
    CHECK(rec.t0 == doctest::Approx(7.0 + 0.25 * 5));
    CHECK(rec.coord_names == std::vector<std::string>{"u", "w"});

    CHECK_THROWS_AS(reconstruct(r, IndexRange{5, 5}), ConfigError);
    CHECK_THROWS_AS(reconstruct(r, IndexRange{-1, 4}), ConfigError);
}

TEST_CASE("forecast mean is the reconstruction shifted by the modal mean") {
    Rng rng(29);
    Eigen::MatrixXcd modes(4, 2);
    for (int j = 0; j < 2; ++j)
        for (int i = 0; i < 4; ++i) modes(i, j) = {rng.normal(0.0, 1.0), rng.normal(0.0, 1.0)};
    Eigen::VectorXcd eigs(2);
    eigs << std::polar(1.0, 0.4), std::polar(1.0, -0.9);

    Eigen::MatrixXcd v(4, 50);
    Eigen::VectorXcd amp = Eigen::VectorXcd::Ones(2);
    for (int t = 0; t < 50; ++t) {
        v.col(t) = modes * amp;
        for (int i = 0; i < 4; ++i) v(i, t) += cd{rng.normal(0.0, 0.2), rng.normal(0.0, 0.2)};
        amp = amp.cwiseProduct(eigs);
    }
    const SnapshotMatrix data = make_snapshots(v, 1.0);
    const ReducedOrderModel r =
        fit_coefficients(handmade_decomposition(modes, eigs), data, {0, 20});
    const NoiseDecomposition n = decompose_noise(r, data, {20, 50});

    const auto [mean10, var10] = forecast_stats(r, n, 10);
    const auto [mean40, var40] = forecast_stats(r, n, 40);
    const SnapshotMatrix rec = reconstruct(r, {0, 50});

    // Offset is constant in t and matches the fitted modal mean.
    for (int i = 0; i < 4; ++i) {
        const cd off10 = mean10(i) - rec.values(i, 10);
        const cd off40 = mean40(i) - rec.values(i, 40);
        CHECK(std::abs(off10 - off40) < 1e-12);
        CHECK(off10.real() == doctest::Approx(n.gaussian_fits[i].mean_re));
        CHECK(off10.imag() == doctest::Approx(n.gaussian_fits[i].mean_im));
        const double expected_var = n.gaussian_fits[i].std_re * n.gaussian_fits[i].std_re +
                                    n.gaussian_fits[i].std_im * n.gaussian_fits[i].std_im;
        CHECK(var10(i) == doctest::Approx(expected_var));
    }
    CHECK(var10 == var40);
}

TEST_CASE("noise-free forecast is the deterministic prediction") {
    Eigen::MatrixXcd modes = Eigen::MatrixXcd::Identity(3, 2);
    Eigen::VectorXcd eigs(2);
    eigs << std::polar(1.0, 0.3), std::polar(1.0, 1.1);
    Eigen::VectorXcd amps(2);
    amps << cd{1.0, 0.0}, cd{2.0, 0.0};

    const SnapshotMatrix data = modal_trajectory(modes, eigs, amps, 30);
    const KoopmanDecomposition kd = compute_dmd(data);
    const ReducedOrderModel r = fit_coefficients(kd, data, {0, 10});
    const NoiseDecomposition n = decompose_noise(r, data, {10, 30});

    const auto [mean, var] = forecast_stats(r, n, 12);
    const SnapshotMatrix rec = reconstruct(r, {12, 13});
    CHECK((mean - rec.values.col(0)).norm() < 1e-8);
    CHECK(var.maxCoeff() < 1e-16);
}

TEST_CASE("fit rejects bad shapes and windows") {
    Rng rng(8);
    Eigen::MatrixXcd v(3, 10);
    for (int k = 0; k < 10; ++k)
        for (int i = 0; i < 3; ++i) v(i, k) = {rng.normal(0.0, 1.0), rng.normal(0.0, 1.0)};
    const SnapshotMatrix data = make_snapshots(v, 1.0);
    const KoopmanDecomposition kd = compute_dmd(data);

    CHECK_THROWS_AS(fit_coefficients(kd, data, IndexRange{5, 5}), ConfigError);
    CHECK_THROWS_AS(fit_coefficients(kd, data, IndexRange{0, 11}), ConfigError);
    CHECK_THROWS_AS(fit_coefficients(kd, data, IndexRange{-2, 4}), ConfigError);

    Eigen::MatrixXcd v2(4, 10);
    v2.setZero();
    v2(0, 0) = 1.0;
    SnapshotMatrix other = make_snapshots(v2, 1.0);
    CHECK_THROWS_AS(fit_coefficients(kd, other, IndexRange{0, 10}), ConfigError);
}
