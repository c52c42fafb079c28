#pragma once

#include <Eigen/Dense>
#include <optional>

#include "krom/snapshots.hpp"

namespace krom {

// Spectral decomposition of the one-step operator identified from data.
// Mode columns are unit norm with a deterministic phase; ordering follows the
// pre-normalization mode norms, largest first.
struct KoopmanDecomposition {
    Eigen::VectorXcd eigenvalues;    // M
    Eigen::MatrixXcd modes;          // n_obs x M, unit columns
    Eigen::VectorXd raw_mode_norms;  // M, non-increasing
    int rank_used = 0;
    SnapshotMeta source_meta;

    int mode_count() const { return static_cast<int>(eigenvalues.size()); }
    void validate() const;
};

// Exact DMD: thin SVD of X0 = columns 0..n_t-2, reduced operator
// U* X1 V S^-1, modes X1 V S^-1 w / lambda (projected modes U w when
// |lambda| < 1e-12). `rank` truncates the SVD; by default singular values
// below 1e-12 * sigma_max are dropped.
KoopmanDecomposition compute_dmd(const SnapshotMatrix& data, std::optional<int> rank = {});

// Keep the first J modes (the largest-norm ones). Ordering preserved, so
// spectra are nested across increasing J.
KoopmanDecomposition truncate(const KoopmanDecomposition& decomposition, int modes_to_keep);

}  // namespace krom
