#include "krom/systems.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include "krom/errors.hpp"
#include "krom/rng.hpp"

namespace krom {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Fixed sub-stream offsets so each noise source draws from its own sequence
// regardless of how many values the others consume.
enum LinearStream : std::uint64_t { kLinModes = 0, kLinEigs = 1, kLinNoise = 2 };
enum AnharmonicStream : std::uint64_t {
    kAnhActions = 0,
    kAnhAngles = 1,
    kAnhPermP = 2,
    kAnhPermQ = 3,
    kAnhMatP = 4,
    kAnhMatQ = 5,
    kAnhEta = 6
};
enum KuramotoStream : std::uint64_t { kKurOmega = 0, kKurTheta = 1, kKurZeta = 2, kKurXi = 3 };

double mod_period(double x, double period) {
    double y = std::fmod(x, period);
    if (y < 0.0) y += period;
    if (y >= period) y = 0.0;  // rounding at the seam
    return y;
}

void check_permutation(const std::vector<int>& p, const char* what) {
    std::vector<bool> seen(p.size(), false);
    for (int v : p) {
        if (v < 0 || v >= static_cast<int>(p.size()) || seen[static_cast<std::size_t>(v)])
            throw ConfigError(std::string(what) + " is not a permutation");
        seen[static_cast<std::size_t>(v)] = true;
    }
}

std::vector<int> apply_perm(const std::vector<int>& perm, const std::vector<int>& v) {
    std::vector<int> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        out[i] = v[static_cast<std::size_t>(perm[i])];
    return out;
}

}  // namespace

void LinearModalConfig::validate() const {
    if (J_true < 1) throw ConfigError("J_true must be at least 1");
    if (n < J_true) throw ConfigError("state dimension must be at least J_true");
    if (noise_std < 0.0) throw ConfigError("noise_std must be nonnegative");
    if (n_steps < 2) throw ConfigError("need at least 2 time steps");
}

std::pair<SnapshotMatrix, LinearGroundTruth> simulate_linear_modal(const LinearModalConfig& cfg) {
    cfg.validate();
    Rng mode_rng(cfg.seed, kLinModes);
    Rng eig_rng(cfg.seed, kLinEigs);
    Rng noise_rng(cfg.seed, kLinNoise);

    LinearGroundTruth truth;
    truth.modes.resize(cfg.n, cfg.J_true);
    for (int j = 0; j < cfg.J_true; ++j) {
        Eigen::VectorXd m(cfg.n);
        for (int i = 0; i < cfg.n; ++i) m(i) = mode_rng.uniform(-1.0, 1.0);
        truth.modes.col(j) = (m / m.norm()).cast<std::complex<double>>();
    }
    truth.eigenvalues.resize(cfg.J_true);
    for (int j = 0; j < cfg.J_true; ++j) {
        std::complex<double> z;
        do {
            z = {eig_rng.uniform(-1.0, 1.0), eig_rng.uniform(-1.0, 1.0)};
        } while (std::abs(z) < 1e-12);
        truth.eigenvalues(j) = z / std::abs(z);
    }

    Eigen::MatrixXcd values(cfg.n, cfg.n_steps);
    Eigen::VectorXcd powers = Eigen::VectorXcd::Ones(cfg.J_true);
    for (int t = 0; t < cfg.n_steps; ++t) {
        values.col(t) = truth.modes * powers;
        if (cfg.noise_std > 0.0)
            for (int i = 0; i < cfg.n; ++i)
                values(i, t) += noise_rng.normal(0.0, cfg.noise_std);  // xi is real
        powers.array() *= truth.eigenvalues.array();
    }

    SnapshotMatrix snap = make_snapshots(std::move(values), 1.0, 0.0);
    return {std::move(snap), std::move(truth)};
}

int AnharmonicConfig::n_steps() const { return static_cast<int>(std::llround(t_final / dt)); }

void AnharmonicConfig::validate() const {
    if (n_osc < 1) throw ConfigError("need at least one oscillator");
    if (dt <= 0.0) throw ConfigError("dt must be positive");
    if (coupling_c <= 0.0 || coupling_c >= 1.0) throw ConfigError("coupling c must be in (0,1)");
    if (lambda_exp <= 0.0) throw ConfigError("exponential rate must be positive");
    if (noise_std < 0.0) throw ConfigError("noise_std must be nonnegative");
    if (n_steps() < 1) throw ConfigError("t_final must cover at least one step");
}

void PermutationState::validate() const {
    const std::size_t n = p.size();
    if (n == 0 || q.size() != n || perm_P.size() != n || perm_Q.size() != n)
        throw ConfigError("permutation state sizes disagree");
    check_permutation(p, "p");
    check_permutation(q, "q");
    check_permutation(perm_P, "P");
    check_permutation(perm_Q, "Q");
}

EdgeAtTime step_permutation(const PermutationState& state, int t) {
    state.validate();
    if (t < 0) throw ConfigError("time must be nonnegative");
    EdgeAtTime out;
    out.p_t = state.p;
    out.q_t = state.q;
    for (int k = 0; k < t; ++k) {
        out.p_t = apply_perm(state.perm_P, out.p_t);
        out.q_t = apply_perm(state.perm_Q, out.q_t);
    }
    out.edge = {out.p_t[0], out.q_t[0]};
    return out;
}

PermutationState anharmonic_permutations(const AnharmonicConfig& cfg) {
    cfg.validate();
    PermutationState perms;
    perms.p = Rng(cfg.seed, kAnhPermP).permutation(cfg.n_osc);
    perms.q = Rng(cfg.seed, kAnhPermQ).permutation(cfg.n_osc);
    perms.perm_P = Rng(cfg.seed, kAnhMatP).permutation(cfg.n_osc);
    perms.perm_Q = Rng(cfg.seed, kAnhMatQ).permutation(cfg.n_osc);
    return perms;
}

SnapshotMatrix simulate_anharmonic(const AnharmonicConfig& cfg) {
    cfg.validate();
    const int n = cfg.n_osc;
    const int steps = cfg.n_steps();

    Rng action_rng(cfg.seed, kAnhActions);
    Rng angle_rng(cfg.seed, kAnhAngles);
    Rng eta_rng(cfg.seed, kAnhEta);

    Eigen::VectorXd action(n), angle(n);
    for (int j = 0; j < n; ++j) action(j) = action_rng.exponential(cfg.lambda_exp);
    for (int j = 0; j < n; ++j) angle(j) = angle_rng.uniform01();

    const PermutationState perms = anharmonic_permutations(cfg);

    Eigen::MatrixXcd values(2 * n, steps + 1);
    auto record = [&](int col) {
        for (int j = 0; j < n; ++j) {
            values(j, col) = action(j);
            values(n + j, col) = angle(j);
        }
    };
    record(0);

    std::vector<int> p_cur = perms.p;
    std::vector<int> q_cur = perms.q;
    int next_jump = 0;
    for (int s = 1; s <= steps; ++s) {
        const double t_prev = (s - 1) * cfg.dt;
        // Jumps fire at k + 0^+, so every integer k <= t_prev injects before
        // the flow continues toward s*dt. The epsilon absorbs accumulated
        // grid rounding (dt is rarely exact in binary).
        while (static_cast<double>(next_jump) <= t_prev + 1e-9) {
            const int a = p_cur[0];
            const int b = q_cur[0];
            if (a != b) {
                const double da = cfg.coupling_c * (action(b) - action(a));
                const double db = cfg.coupling_c * (action(a) - action(b));
                action(a) += da;
                action(b) += db;
            }
            if (cfg.noise_std > 0.0)
                for (int j = 0; j < n; ++j) action(j) += eta_rng.normal(0.0, cfg.noise_std);
            p_cur = apply_perm(perms.perm_P, p_cur);
            q_cur = apply_perm(perms.perm_Q, q_cur);
            ++next_jump;
        }
        for (int j = 0; j < n; ++j) angle(j) = mod_period(angle(j) + action(j) * cfg.dt, 1.0);
        record(s);
    }

    std::vector<std::string> names;
    names.reserve(static_cast<std::size_t>(2 * n));
    for (int j = 0; j < n; ++j) names.push_back("I" + std::to_string(j));
    for (int j = 0; j < n; ++j) names.push_back("theta" + std::to_string(j));
    return make_snapshots(std::move(values), cfg.dt, 0.0, std::move(names));
}

int KuramotoConfig::n_steps() const { return static_cast<int>(std::llround(t_final / dt)); }

void KuramotoConfig::validate() const {
    if (n_osc < 2) throw ConfigError("need at least two oscillators");
    if (dt <= 0.0) throw ConfigError("dt must be positive");
    if (zeta_std < 0.0) throw ConfigError("zeta_std must be nonnegative");
    if (xi_var_param < 0.0) throw ConfigError("xi variance must be nonnegative");
    if (omega_range.second < omega_range.first) throw ConfigError("omega range reversed");
    if (n_steps() < 1) throw ConfigError("t_final must cover at least one step");
}

Eigen::MatrixXd kuramoto_zeta(const KuramotoConfig& cfg) {
    cfg.validate();
    const int n = cfg.n_osc;
    Rng zeta_rng(cfg.seed, kKurZeta);
    Eigen::MatrixXd zeta = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double z = cfg.zeta_std > 0.0 ? zeta_rng.normal(0.0, cfg.zeta_std) : 0.0;
            zeta(i, j) = z;
            zeta(j, i) = z;
        }
    return zeta;
}

SnapshotMatrix simulate_kuramoto(const KuramotoConfig& cfg) {
    cfg.validate();
    const int n = cfg.n_osc;
    const int steps = cfg.n_steps();
    const double xi_std = std::sqrt(cfg.xi_var_param);

    Rng omega_rng(cfg.seed, kKurOmega);
    Rng theta_rng(cfg.seed, kKurTheta);
    Rng xi_rng(cfg.seed, kKurXi);

    Eigen::VectorXd omega(n), theta(n);
    for (int i = 0; i < n; ++i) omega(i) = omega_rng.uniform(cfg.omega_range.first, cfg.omega_range.second);
    for (int i = 0; i < n; ++i) theta(i) = theta_rng.uniform(0.0, kTwoPi);

    const Eigen::MatrixXd zeta = kuramoto_zeta(cfg);

    Eigen::MatrixXcd values(n, steps + 1);
    for (int i = 0; i < n; ++i) values(i, 0) = theta(i);

    Eigen::VectorXd xi = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd theta_next(n);
    for (int s = 1; s <= steps; ++s) {
        if (xi_std > 0.0)
            for (int i = 0; i < n; ++i) xi(i) = xi_rng.normal(0.0, xi_std);
        for (int i = 0; i < n; ++i) {
            double coupling = 0.0;
            for (int j = 0; j < n; ++j)
                coupling += (cfg.K + zeta(i, j)) / n * std::sin(theta(j) - theta(i));
            theta_next(i) = mod_period(theta(i) + cfg.dt * (omega(i) + xi(i) + coupling), kTwoPi);
        }
        theta = theta_next;
        for (int i = 0; i < n; ++i) values(i, s) = theta(i);
    }

    std::vector<std::string> names;
    names.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) names.push_back("theta" + std::to_string(i));
    SnapshotMatrix snap = make_snapshots(std::move(values), cfg.dt, 0.0, std::move(names));
    snap.period = kTwoPi;
    return snap;
}

}  // namespace krom
