#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace krom {

struct ShapiroResult {
    double w = 0.0;
    double p = 0.0;
};

// Shapiro-Wilk normality test, Royston's 1995 approximation (AS R94 with the
// AS 111 normal quantile and AS 66 tail probability). Valid for
// 3 <= n <= 5000; throws outside that range or on zero-variance samples.
ShapiroResult shapiro_wilk(const Eigen::VectorXd& sample);

struct NormalityReport {
    std::vector<int> model_sizes;
    std::vector<Eigen::VectorXd> p_values;  // per size, per coordinate
    std::vector<double> means;
    std::vector<double> medians;
    std::optional<int> selected_J;
    double threshold = 0.05;
};

// Minimum-mode heuristic: per model size, test each coordinate's modal-noise
// real parts for normality; selected_J is the smallest size whose p-value
// mean and median both exceed the threshold. Rationale: too few modes leave
// structured dynamics in the "noise", which breaks normality. Sequences
// longer than 5000 samples are subsampled deterministically from
// subsample_seed; zero-variance coordinates score p = 0 (a point mass is not
// Gaussian). Set test_imaginary to examine imaginary parts instead.
NormalityReport select_min_modes(const std::vector<std::pair<int, Eigen::MatrixXcd>>& modal_sets,
                                 double threshold = 0.05, bool test_imaginary = false,
                                 std::uint64_t subsample_seed = 0);

}  // namespace krom
