#include "krom/kmd.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <vector>

#include "krom/errors.hpp"

namespace krom {

namespace {

constexpr double kRankRelTol = 1e-12;
constexpr double kSmallEigTol = 1e-12;

// Rotate a unit column so its largest-magnitude entry is real and positive.
// First index attains the max on ties, which pins the phase uniquely.
void fix_phase(Eigen::Ref<Eigen::VectorXcd> col) {
    Eigen::Index pivot = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < col.size(); ++i) {
        double a = std::abs(col(i));
        if (a > best) {
            best = a;
            pivot = i;
        }
    }
    if (best <= 0.0) return;
    std::complex<double> z = col(pivot);
    col *= std::conj(z) / std::abs(z);
}

}  // namespace

void KoopmanDecomposition::validate() const {
    const int m = mode_count();
    if (m <= 0) throw NumericError("decomposition has no modes");
    if (modes.cols() != m || raw_mode_norms.size() != m)
        throw NumericError("decomposition fields disagree on mode count");
    if (!eigenvalues.allFinite() || !modes.allFinite() || !raw_mode_norms.allFinite())
        throw NumericError("decomposition contains non-finite values");
    for (int j = 0; j < m; ++j) {
        if (std::abs(modes.col(j).norm() - 1.0) > 1e-8)
            throw NumericError("mode column is not unit norm");
        if (j + 1 < m && raw_mode_norms(j) + 1e-12 < raw_mode_norms(j + 1))
            throw NumericError("raw mode norms are not non-increasing");
    }
}

KoopmanDecomposition compute_dmd(const SnapshotMatrix& data, std::optional<int> rank) {
    data.validate();
    const Eigen::Index n = data.values.rows();
    const Eigen::Index nt = data.values.cols();
    if (nt < 2) throw ConfigError("need at least two snapshots");

    const Eigen::MatrixXcd x0 = data.values.leftCols(nt - 1);
    const Eigen::MatrixXcd x1 = data.values.rightCols(nt - 1);

    Eigen::BDCSVD<Eigen::MatrixXcd> svd(x0, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& sigma = svd.singularValues();
    if (sigma.size() == 0 || sigma(0) <= 0.0)
        throw NumericError("snapshot matrix is zero, no dynamics to identify");

    int numerical_rank = 0;
    const double cutoff = kRankRelTol * sigma(0);
    for (Eigen::Index i = 0; i < sigma.size(); ++i)
        if (sigma(i) > cutoff) ++numerical_rank;

    int r = numerical_rank;
    if (rank) {
        if (*rank < 1) throw ConfigError("rank must be positive");
        if (*rank > numerical_rank)
            throw NumericError("requested rank exceeds numerical rank of the data");
        r = *rank;
    }

    const Eigen::MatrixXcd u = svd.matrixU().leftCols(r);
    const Eigen::MatrixXcd v = svd.matrixV().leftCols(r);
    const Eigen::VectorXd s = sigma.head(r);

    // Reduced operator U* X1 V S^-1 and its spectrum.
    const Eigen::MatrixXcd x1vs = x1 * v * s.cwiseInverse().asDiagonal();
    const Eigen::MatrixXcd atilde = u.adjoint() * x1vs;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> eig(atilde);
    if (eig.info() != Eigen::Success) throw NumericError("eigen decomposition failed");
    const Eigen::VectorXcd lambda = eig.eigenvalues();
    const Eigen::MatrixXcd w = eig.eigenvectors();

    Eigen::MatrixXcd modes(n, r);
    Eigen::VectorXd norms(r);
    for (int j = 0; j < r; ++j) {
        Eigen::VectorXcd mj;
        if (std::abs(lambda(j)) < kSmallEigTol) {
            mj = u * w.col(j);  // exact formula degenerates near lambda = 0
        } else {
            mj = x1vs * w.col(j) / lambda(j);
        }
        const double nrm = mj.norm();
        if (!(nrm > 0.0) || !mj.allFinite()) throw NumericError("degenerate mode encountered");
        norms(j) = nrm;
        modes.col(j) = mj / nrm;
        fix_phase(modes.col(j));
    }

    // Largest raw norm first; ties fall back to |lambda| desc, arg(lambda)
    // asc, then original column index so the order is reproducible.
    std::vector<int> order(r);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        if (norms(a) != norms(b)) return norms(a) > norms(b);
        const double ma = std::abs(lambda(a)), mb = std::abs(lambda(b));
        if (ma != mb) return ma > mb;
        const double aa = std::arg(lambda(a)), ab = std::arg(lambda(b));
        if (aa != ab) return aa < ab;
        return a < b;
    });

    KoopmanDecomposition out;
    out.eigenvalues.resize(r);
    out.modes.resize(n, r);
    out.raw_mode_norms.resize(r);
    for (int j = 0; j < r; ++j) {
        out.eigenvalues(j) = lambda(order[j]);
        out.modes.col(j) = modes.col(order[j]);
        out.raw_mode_norms(j) = norms(order[j]);
    }
    out.rank_used = r;
    out.source_meta = data.meta();
    out.validate();
    return out;
}

KoopmanDecomposition truncate(const KoopmanDecomposition& decomposition, int modes_to_keep) {
    decomposition.validate();
    if (modes_to_keep < 1) throw ConfigError("must keep at least one mode");
    if (modes_to_keep > decomposition.mode_count())
        throw ConfigError("cannot keep more modes than the decomposition has");
    KoopmanDecomposition out;
    out.eigenvalues = decomposition.eigenvalues.head(modes_to_keep);
    out.modes = decomposition.modes.leftCols(modes_to_keep);
    out.raw_mode_norms = decomposition.raw_mode_norms.head(modes_to_keep);
    out.rank_used = decomposition.rank_used;
    out.source_meta = decomposition.source_meta;
    return out;
}

}  // namespace krom
