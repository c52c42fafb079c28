#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>
#include <vector>

#include "krom/snapshots.hpp"

namespace krom {

// x(t) = sum_j m_j lambda_j^t + xi(t): real unit-norm modes, eigenvalues on
// the unit circle, real Gaussian measurement noise on each coordinate.
struct LinearModalConfig {
    int J_true = 10;
    int n = 20;
    double noise_std = 0.25;
    int n_steps = 500;
    std::uint64_t seed = 0;

    void validate() const;
};

struct LinearGroundTruth {
    Eigen::MatrixXcd modes;        // n x J_true, unit columns (real entries)
    Eigen::VectorXcd eigenvalues;  // J_true, on the unit circle
};

std::pair<SnapshotMatrix, LinearGroundTruth> simulate_linear_modal(const LinearModalConfig& cfg);

// Network of anharmonic oscillators (theta' = I, angles mod 1) exchanging
// action across one permutation-driven edge at each integer time, with
// Gaussian noise injected into every action at each jump.
struct AnharmonicConfig {
    int n_osc = 10;
    double dt = 0.05;
    double t_final = 20.0;
    double coupling_c = 0.5;   // shared c for every edge, in (0,1)
    double lambda_exp = 1.0;   // rate of the exponential initial actions
    double noise_std = 0.05;   // sigma of the per-jump action noise
    std::uint64_t seed = 0;

    int n_steps() const;
    void validate() const;
};

// Permutation edge dynamics p(t) = P^floor(t) p, q(t) = Q^floor(t) q. The
// matrices act as (P v)_i = v_{perm[i]}, so perm_P/perm_Q fully describe
// the fixed P and Q.
struct PermutationState {
    std::vector<int> p;
    std::vector<int> q;
    std::vector<int> perm_P;
    std::vector<int> perm_Q;

    void validate() const;
};

struct EdgeAtTime {
    std::vector<int> p_t;
    std::vector<int> q_t;
    std::pair<int, int> edge;  // (p_t[0], q_t[0]), undirected, self-loop possible
};

EdgeAtTime step_permutation(const PermutationState& state, int t);

// The permutations a simulation run with this config will draw; lets callers
// reconstruct the edge schedule without rerunning the dynamics.
PermutationState anharmonic_permutations(const AnharmonicConfig& cfg);

// Observable trajectory (I_1..I_n, theta_1..theta_n), 2n x (n_steps + 1).
SnapshotMatrix simulate_anharmonic(const AnharmonicConfig& cfg);

// Kuramoto oscillators with symmetric random coupling strengths and a fresh
// Gaussian frequency perturbation each Euler step.
struct KuramotoConfig {
    int n_osc = 10;
    double dt = 0.05;
    double t_final = 20.0;
    double K = 5.0;
    double zeta_std = 1.0;                       // sigma of the symmetric zeta draws
    double xi_var_param = 0.25;                  // variance of the xi perturbation
    std::pair<double, double> omega_range{0.25, 0.75};
    std::uint64_t seed = 0;

    int n_steps() const;
    void validate() const;
};

// The symmetric coupling randomness a run with this config will draw
// (zero diagonal).
Eigen::MatrixXd kuramoto_zeta(const KuramotoConfig& cfg);

// Angle trajectory theta in [0, 2*pi), n_osc x (n_steps + 1), period 2*pi.
SnapshotMatrix simulate_kuramoto(const KuramotoConfig& cfg);

}  // namespace krom
