#pragma once

#include <Eigen/Dense>
#include <complex>
#include <utility>

#include "krom/kmd.hpp"

namespace krom {

struct NoiseDecomposition;

// Half-open range [begin, end) of global snapshot time indices.
struct IndexRange {
    int begin = 0;
    int end = 0;

    int count() const { return end - begin; }
    bool operator==(const IndexRange&) const = default;
};

// Deterministic reduced model x(t) ~ sum_j c_j lambda_j^t m_j. Time indices
// are global (t counts from the first snapshot), so forecasting past the
// training window is just evaluation at larger t.
struct ReducedOrderModel {
    KoopmanDecomposition decomposition;  // truncated, J modes
    Eigen::VectorXcd coefficients;       // J
    IndexRange train_window;
    double dt = 0.0;

    int mode_count() const { return decomposition.mode_count(); }
    void validate() const;
};

// base^t for integer t >= 0 by repeated squaring; 0^0 = 1.
std::complex<double> cpow_int(std::complex<double> base, long long t);

// One stacked least-squares problem min_c sum_t ||x(t) - M diag(lambda^t) c||^2
// over the window. Solved through a thin QR of M followed by an SVD of the
// compressed stack, never the normal equations: the lambda^t columns are
// Vandermonde-like and squaring would wash out the small modes. Rank-deficient
// stacks get the minimum-norm solution.
ReducedOrderModel fit_coefficients(const KoopmanDecomposition& decomposition,
                                   const SnapshotMatrix& data, IndexRange window);

// Evaluate the deterministic model at global indices [range.begin, range.end).
// Metadata (names, representation, period) is carried over from the source so
// downstream angle handling keeps working on reconstructions.
SnapshotMatrix reconstruct(const ReducedOrderModel& model, IndexRange range);

// First and second forecast moments at global index t: mean is the
// deterministic prediction shifted by the fitted modal-noise mean, variance
// is the per-coordinate modal-noise variance (real plus imaginary parts).
std::pair<Eigen::VectorXcd, Eigen::VectorXd> forecast_stats(const ReducedOrderModel& model,
                                                            const NoiseDecomposition& noise,
                                                            long long t);

}  // namespace krom
