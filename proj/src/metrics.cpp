#include "krom/metrics.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "krom/errors.hpp"

namespace krom {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

double geodesic_error(const Eigen::VectorXd& theta, const Eigen::VectorXd& phi, double period) {
    if (theta.size() != phi.size()) throw ConfigError("trace lengths differ");
    if (theta.size() < 1) throw ConfigError("empty trace");
    if (period <= 0.0) throw ConfigError("period must be positive");
    const double scale = kTwoPi / period;
    double sum = 0.0;
    for (Eigen::Index t = 0; t < theta.size(); ++t) {
        const std::complex<double> d =
            std::polar(1.0, theta(t) * scale) - std::polar(1.0, phi(t) * scale);
        sum += std::norm(d);
    }
    return std::sqrt(sum) / static_cast<double>(theta.size());
}

double euclidean_error(const Eigen::VectorXcd& x, const Eigen::VectorXcd& x_hat) {
    if (x.size() != x_hat.size()) throw ConfigError("trace lengths differ");
    if (x.size() < 1) throw ConfigError("empty trace");
    return (x - x_hat).norm() / static_cast<double>(x.size());
}

double true_geodesic(double a, double b, double period) {
    if (period <= 0.0) throw ConfigError("period must be positive");
    double d = std::fmod(std::abs(a - b), period);
    return std::min(d, period - d);
}

double residence_time(const Eigen::VectorXd& theta, const Eigen::VectorXd& phi, double sigma,
                      double period) {
    if (theta.size() != phi.size()) throw ConfigError("trace lengths differ");
    if (theta.size() < 1) throw ConfigError("empty trace");
    if (sigma < 0.0) throw ConfigError("sigma must be nonnegative");
    Eigen::Index hits = 0;
    for (Eigen::Index t = 0; t < theta.size(); ++t)
        if (true_geodesic(theta(t), phi(t), period) < 2.0 * sigma) ++hits;
    return static_cast<double>(hits) / static_cast<double>(theta.size());
}

double residence_time_linear(const Eigen::VectorXd& x, const Eigen::VectorXd& x_rom,
                             double sigma) {
    if (x.size() != x_rom.size()) throw ConfigError("trace lengths differ");
    if (x.size() < 1) throw ConfigError("empty trace");
    if (sigma < 0.0) throw ConfigError("sigma must be nonnegative");
    Eigen::Index hits = 0;
    for (Eigen::Index t = 0; t < x.size(); ++t)
        if (std::abs(x(t) - x_rom(t)) < 2.0 * sigma) ++hits;
    return static_cast<double>(hits) / static_cast<double>(x.size());
}

double eigenvalue_discrepancy(const Eigen::VectorXcd& truth, const Eigen::VectorXcd& computed) {
    if (truth.size() < 1 || computed.size() < 1) throw ConfigError("empty eigenvalue set");
    double total = 0.0;
    for (Eigen::Index j = 0; j < computed.size(); ++j) {
        double best = std::numeric_limits<double>::infinity();
        for (Eigen::Index i = 0; i < truth.size(); ++i)
            best = std::min(best, std::abs(computed(j) - truth(i)));
        total += best;
    }
    return total / static_cast<double>(computed.size());
}

}  // namespace krom
