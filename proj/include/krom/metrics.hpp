#pragma once

#include <Eigen/Dense>
#include <vector>

namespace krom {

// Average chord-length error between two angle traces: with angles mapped to
// the unit circle through 2*pi/period,
//   (1/(T+1)) * sqrt(sum_t |e^{i a(t)} - e^{i b(t)}|^2).
// The 1/(T+1) factor deliberately sits outside the square root (not the RMS
// convention).
double geodesic_error(const Eigen::VectorXd& theta, const Eigen::VectorXd& phi, double period);

// Euclidean analogue for non-angular coordinates, same normalization:
// (1/(T+1)) * sqrt(sum_t |x(t) - x_hat(t)|^2).
double euclidean_error(const Eigen::VectorXcd& x, const Eigen::VectorXcd& x_hat);

// Shortest arc between two angles on a circle of circumference `period`.
double true_geodesic(double a, double b, double period);

// Fraction of steps whose true geodesic distance lies in [0, 2*sigma). The
// half-open interval makes sigma = 0 yield exactly 0.
double residence_time(const Eigen::VectorXd& theta, const Eigen::VectorXd& phi, double sigma,
                      double period);

// Euclidean analogue: fraction of steps with |x - x_rom| < 2*sigma.
double residence_time_linear(const Eigen::VectorXd& x, const Eigen::VectorXd& x_rom,
                             double sigma);

// Mean over computed eigenvalues of the distance to the nearest truth
// eigenvalue. Directed on purpose: the two sets may differ in size.
double eigenvalue_discrepancy(const Eigen::VectorXcd& truth, const Eigen::VectorXcd& computed);

struct MetricReport {
    std::vector<double> per_coordinate_error;
    std::vector<double> residence_fraction;
    double eigenvalue_discrepancy = 0.0;
    int modes_used = 0;
};

}  // namespace krom
