#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "krom/rom.hpp"

namespace krom {

// Per-coordinate Gaussian parameters. Real and imaginary parts are fitted
// independently (unbiased n-1 standard deviations).
struct GaussianFit {
    double mean_re = 0.0;
    double std_re = 0.0;
    double mean_im = 0.0;
    double std_im = 0.0;

    // Scalar spread for complex-represented coordinates: the complex
    // deviation magnitude has E|z-mu|^2 = var_re + var_im; dividing by two
    // spreads that across one axis.
    double pooled_std() const { return std::sqrt(0.5 * (std_re * std_re + std_im * std_im)); }
};

// Residual split r(t) = rho(t) + eta(t): rho is the projection of the
// residual onto the span of the retained modes (source of the confidence
// band), eta the orthogonal remainder.
struct NoiseDecomposition {
    Eigen::MatrixXcd residual;    // r(t) = data - reconstruction
    Eigen::MatrixXcd modal;       // rho(t) = M M+ r(t)
    Eigen::MatrixXcd innovation;  // eta(t) = r(t) - rho(t)
    IndexRange eval_window;
    std::vector<GaussianFit> gaussian_fits;  // fits of the modal sequence

    void validate() const;
};

// Reconstruction trace with a +-k sigma band, constant width per coordinate.
struct ConfidenceBand {
    Eigen::MatrixXd center;      // n_obs x n_t display trace
    Eigen::VectorXd half_width;  // k * sigma per coordinate
    double k = 2.0;
};

// r(t) = data column - reconstruction column over the window.
Eigen::MatrixXcd compute_residual(const ReducedOrderModel& model, const SnapshotMatrix& data,
                                  IndexRange window);

// rho(t) = M M+ r(t); pseudo-inverse by SVD with relative cutoff 1e-12.
Eigen::MatrixXcd project_modal(const KoopmanDecomposition& decomposition,
                               const Eigen::MatrixXcd& residual);

// eta(t) = r(t) - rho(t), orthogonal to every retained mode by construction.
Eigen::MatrixXcd compute_innovation(const Eigen::MatrixXcd& residual,
                                    const Eigen::MatrixXcd& modal);

// Per-coordinate sample mean/std of real and imaginary parts (columns are
// samples). Needs at least 2 columns.
std::vector<GaussianFit> fit_gaussian(const Eigen::MatrixXcd& sequence);

// Full split of data against model over window, Gaussian fits included.
NoiseDecomposition decompose_noise(const ReducedOrderModel& model, const SnapshotMatrix& data,
                                   IndexRange window);

// Band over [range.begin, range.end): center is the real part of the
// reconstruction (decomplexified angle for complexified data), half width is
// k*std_re per coordinate (pooled std for complexified data).
ConfidenceBand confidence_band(const ReducedOrderModel& model,
                               const std::vector<GaussianFit>& fits, IndexRange range,
                               double k = 2.0);

}  // namespace krom
