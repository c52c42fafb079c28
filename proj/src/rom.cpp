#include "krom/rom.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>
#include <limits>

#include "krom/errors.hpp"
#include "krom/noise.hpp"

namespace krom {

std::complex<double> cpow_int(std::complex<double> base, long long t) {
    if (t < 0) throw ConfigError("negative time index");
    std::complex<double> acc(1.0, 0.0);
    while (t > 0) {
        if (t & 1) acc *= base;
        base *= base;
        t >>= 1;
    }
    return acc;
}

void ReducedOrderModel::validate() const {
    decomposition.validate();
    if (coefficients.size() != decomposition.mode_count())
        throw NumericError("coefficient count does not match mode count");
    if (!coefficients.allFinite()) throw NumericError("coefficients contain non-finite values");
    if (train_window.count() < 1 || train_window.begin < 0)
        throw ConfigError("invalid training window");
    if (!(dt > 0.0)) throw ConfigError("dt must be positive");
}

ReducedOrderModel fit_coefficients(const KoopmanDecomposition& decomposition,
                                   const SnapshotMatrix& data, IndexRange window) {
    decomposition.validate();
    data.validate();
    const Eigen::Index n = data.values.rows();
    const int J = decomposition.mode_count();
    if (decomposition.modes.rows() != n)
        throw ConfigError("mode dimension does not match data dimension");
    if (window.count() < 1) throw ConfigError("empty training window");
    if (window.begin < 0 || window.end > data.n_t())
        throw ConfigError("training window outside data range");

    // Thin QR of the mode matrix: every design block M diag(lambda^t) shares
    // the orthonormal factor Q1, so the (count*n) x J stack compresses
    // exactly to count J x J blocks R1 diag(lambda^t) with right-hand sides
    // Q1* x(t). Same minimizer set, a fraction of the memory.
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(decomposition.modes);
    const Eigen::MatrixXcd q1 = qr.householderQ() * Eigen::MatrixXcd::Identity(n, J);
    const Eigen::MatrixXcd r1 =
        qr.matrixQR().topRows(J).triangularView<Eigen::Upper>();

    const int count = window.count();
    Eigen::MatrixXcd b(static_cast<Eigen::Index>(count) * J, J);
    Eigen::VectorXcd y(static_cast<Eigen::Index>(count) * J);
    Eigen::VectorXcd powers(J);
    for (int k = 0; k < count; ++k) {
        const long long t = window.begin + k;
        for (int j = 0; j < J; ++j) powers(j) = cpow_int(decomposition.eigenvalues(j), t);
        b.middleRows(static_cast<Eigen::Index>(k) * J, J) = r1 * powers.asDiagonal();
        y.segment(static_cast<Eigen::Index>(k) * J, J) =
            q1.adjoint() * data.values.col(window.begin + k);
    }

    Eigen::BDCSVD<Eigen::MatrixXcd> svd(b, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(1e-12);

    ReducedOrderModel model;
    model.decomposition = decomposition;
    model.coefficients = svd.solve(y);
    model.train_window = window;
    model.dt = data.dt;
    model.validate();
    return model;
}

SnapshotMatrix reconstruct(const ReducedOrderModel& model, IndexRange range) {
    model.validate();
    if (range.count() < 1) throw ConfigError("empty reconstruction range");
    if (range.begin < 0) throw ConfigError("negative time index");

    const SnapshotMeta& meta = model.decomposition.source_meta;
    const int J = model.mode_count();
    SnapshotMatrix out;
    out.values.resize(model.decomposition.modes.rows(), range.count());
    Eigen::VectorXcd scaled(J);
    for (int k = 0; k < range.count(); ++k) {
        for (int j = 0; j < J; ++j)
            scaled(j) = model.coefficients(j) *
                        cpow_int(model.decomposition.eigenvalues(j), range.begin + k);
        out.values.col(k) = model.decomposition.modes * scaled;
    }
    out.dt = meta.dt;
    out.t0 = meta.t0 + meta.dt * range.begin;
    out.coord_names = meta.coord_names;
    out.representation = meta.representation;
    out.period = meta.period;
    return out;
}

std::pair<Eigen::VectorXcd, Eigen::VectorXd> forecast_stats(const ReducedOrderModel& model,
                                                            const NoiseDecomposition& noise,
                                                            long long t) {
    model.validate();
    const Eigen::Index n = model.decomposition.modes.rows();
    if (static_cast<Eigen::Index>(noise.gaussian_fits.size()) != n)
        throw ConfigError("noise fits do not match model dimension");
    if (t < 0 || t > static_cast<long long>(std::numeric_limits<int>::max() - 1))
        throw ConfigError("time index out of range");

    const SnapshotMatrix recon =
        reconstruct(model, IndexRange{static_cast<int>(t), static_cast<int>(t) + 1});
    Eigen::VectorXcd mean(n);
    Eigen::VectorXd variance(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const GaussianFit& g = noise.gaussian_fits[static_cast<std::size_t>(i)];
        mean(i) = recon.values(i, 0) + std::complex<double>(g.mean_re, g.mean_im);
        variance(i) = g.std_re * g.std_re + g.std_im * g.std_im;
    }
    return {std::move(mean), std::move(variance)};
}

}  // namespace krom
