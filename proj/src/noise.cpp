#include "krom/noise.hpp"

#include <Eigen/SVD>
#include <cmath>

#include "krom/errors.hpp"

namespace krom {

void NoiseDecomposition::validate() const {
    if (residual.rows() != modal.rows() || residual.cols() != modal.cols() ||
        residual.rows() != innovation.rows() || residual.cols() != innovation.cols())
        throw NumericError("noise sequences disagree in shape");
    if (eval_window.count() != residual.cols())
        throw NumericError("eval window does not match sequence length");
    if (static_cast<Eigen::Index>(gaussian_fits.size()) != residual.rows())
        throw NumericError("gaussian fit count does not match coordinate count");
    const double scale = std::max(1.0, residual.norm());
    if ((residual - modal - innovation).norm() > 1e-10 * scale)
        throw NumericError("residual does not split into modal + innovation");
    for (const GaussianFit& g : gaussian_fits)
        if (g.std_re < 0.0 || g.std_im < 0.0) throw NumericError("negative fitted std");
}

Eigen::MatrixXcd compute_residual(const ReducedOrderModel& model, const SnapshotMatrix& data,
                                  IndexRange window) {
    model.validate();
    data.validate();
    if (model.decomposition.modes.rows() != data.values.rows())
        throw ConfigError("model dimension does not match data dimension");
    if (window.count() < 1) throw ConfigError("empty window");
    if (window.begin < 0 || window.end > data.n_t())
        throw ConfigError("window outside data range");
    const SnapshotMatrix recon = reconstruct(model, window);
    return data.values.middleCols(window.begin, window.count()) - recon.values;
}

Eigen::MatrixXcd project_modal(const KoopmanDecomposition& decomposition,
                               const Eigen::MatrixXcd& residual) {
    const Eigen::MatrixXcd& m = decomposition.modes;
    if (m.cols() < 1) throw ConfigError("empty mode matrix");
    if (m.rows() != residual.rows()) throw ConfigError("mode/residual dimension mismatch");

    // M M+ r without forming the pseudo-inverse: with M = U S V*, the range
    // projector is U_r U_r* over singular values above the cutoff.
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeThinU);
    const Eigen::VectorXd& sigma = svd.singularValues();
    const double cutoff = 1e-12 * (sigma.size() > 0 ? sigma(0) : 0.0);
    int r = 0;
    for (Eigen::Index i = 0; i < sigma.size(); ++i)
        if (sigma(i) > cutoff) ++r;
    if (r == 0) return Eigen::MatrixXcd::Zero(residual.rows(), residual.cols());
    const Eigen::MatrixXcd u = svd.matrixU().leftCols(r);
    return u * (u.adjoint() * residual);
}

Eigen::MatrixXcd compute_innovation(const Eigen::MatrixXcd& residual,
                                    const Eigen::MatrixXcd& modal) {
    if (residual.rows() != modal.rows() || residual.cols() != modal.cols())
        throw ConfigError("residual/modal shape mismatch");
    return residual - modal;
}

std::vector<GaussianFit> fit_gaussian(const Eigen::MatrixXcd& sequence) {
    const Eigen::Index n = sequence.rows();
    const Eigen::Index count = sequence.cols();
    if (count < 2) throw ConfigError("need at least 2 samples to fit a Gaussian");

    std::vector<GaussianFit> fits(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::VectorXd re = sequence.row(i).real().transpose();
        const Eigen::VectorXd im = sequence.row(i).imag().transpose();
        GaussianFit& g = fits[static_cast<std::size_t>(i)];
        g.mean_re = re.mean();
        g.mean_im = im.mean();
        g.std_re = std::sqrt((re.array() - g.mean_re).square().sum() / double(count - 1));
        g.std_im = std::sqrt((im.array() - g.mean_im).square().sum() / double(count - 1));
    }
    return fits;
}

NoiseDecomposition decompose_noise(const ReducedOrderModel& model, const SnapshotMatrix& data,
                                   IndexRange window) {
    NoiseDecomposition out;
    out.residual = compute_residual(model, data, window);
    out.modal = project_modal(model.decomposition, out.residual);
    out.innovation = compute_innovation(out.residual, out.modal);
    out.eval_window = window;
    out.gaussian_fits = fit_gaussian(out.modal);
    out.validate();
    return out;
}

ConfidenceBand confidence_band(const ReducedOrderModel& model,
                               const std::vector<GaussianFit>& fits, IndexRange range,
                               double k) {
    model.validate();
    if (k <= 0.0) throw ConfigError("band multiplier must be positive");
    const Eigen::Index n = model.decomposition.modes.rows();
    if (static_cast<Eigen::Index>(fits.size()) != n)
        throw ConfigError("fit count does not match model dimension");

    // Delay-embedded models are displayed through their un-lagged block, so
    // the band lives in the base representation (fits slice along with it).
    SnapshotMatrix recon = reconstruct(model, range);
    if (recon.representation.kind == RepKind::hankel) recon = unembed_first_block(recon);
    const bool complexified =
        recon.representation.kind == RepKind::complexified_angle && recon.period.has_value();

    ConfidenceBand band;
    band.k = k;
    band.center = complexified ? decomplexify_angles(recon).values.real() : recon.values.real();
    band.half_width.resize(recon.n_obs());
    for (Eigen::Index i = 0; i < recon.n_obs(); ++i) {
        const GaussianFit& g = fits[static_cast<std::size_t>(i)];
        band.half_width(i) = k * (complexified ? g.pooled_std() : g.std_re);
    }
    return band;
}

}  // namespace krom
