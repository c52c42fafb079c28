#include "krom/modeselect.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "krom/errors.hpp"
#include "krom/rng.hpp"

namespace krom {

namespace {

double poly(const double* c, int nord, double x) {
    double p = c[nord - 1];
    for (int j = nord - 2; j >= 0; --j) p = p * x + c[j];
    return p;
}

// AS 111 (Beasley & Springer 1977): inverse normal CDF, the variant Royston's
// algorithm was published against.
double ppnd(double p) {
    constexpr double a0 = 2.50662823884, a1 = -18.61500062529, a2 = 41.39119773534,
                     a3 = -25.44106049637;
    constexpr double b1 = -8.47351093090, b2 = 23.08336743743, b3 = -21.06224101826,
                     b4 = 3.13082909833;
    constexpr double c0 = -2.78718931138, c1 = -2.29796479134, c2 = 4.85014127135,
                     c3 = 2.32121276858;
    constexpr double d1 = 3.54388924762, d2 = 1.63706781897;

    const double q = p - 0.5;
    if (std::abs(q) <= 0.42) {
        const double r = q * q;
        return q * (((a3 * r + a2) * r + a1) * r + a0) /
               ((((b4 * r + b3) * r + b2) * r + b1) * r + 1.0);
    }
    double r = q < 0.0 ? p : 1.0 - p;
    if (r <= 0.0) throw NumericError("quantile argument outside (0,1)");
    r = std::sqrt(-std::log(r));
    const double v = (((c3 * r + c2) * r + c1) * r + c0) / ((d2 * r + d1) * r + 1.0);
    return q < 0.0 ? -v : v;
}

// AS 66 (Hill 1973): upper/lower normal tail probability.
double alnorm(double x, bool upper) {
    constexpr double ltone = 7.0, utzero = 18.66, con = 1.28;
    bool up = upper;
    double z = x;
    if (z < 0.0) {
        up = !up;
        z = -z;
    }
    double res;
    if (z <= ltone || (up && z <= utzero)) {
        const double y = 0.5 * z * z;
        if (z > con) {
            res = 0.398942280385 * std::exp(-y) /
                  (z - 3.8052e-8 +
                   1.00000615302 /
                       (z + 3.98064794e-4 +
                        1.98615381364 /
                            (z - 0.151679116635 +
                             5.29330324926 /
                                 (z + 4.8385912808 -
                                  15.1508972451 /
                                      (z + 0.742380924027 +
                                       30.789933034 / (z + 3.99019417011))))));
        } else {
            res = 0.5 - z * (0.398942280444 -
                             0.399903438504 * y /
                                 (y + 5.75885480458 -
                                  29.8213557808 /
                                      (y + 2.62433121679 +
                                       48.6959930692 / (y + 5.92885724438))));
        }
    } else {
        res = 0.0;
    }
    return up ? res : 1.0 - res;
}

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

ShapiroResult shapiro_wilk(const Eigen::VectorXd& sample) {
    const int n = static_cast<int>(sample.size());
    if (n < 3) throw ConfigError("Shapiro-Wilk needs at least 3 samples");
    if (n > 5000) throw ConfigError("Shapiro-Wilk approximation is valid up to n = 5000");

    std::vector<double> x(sample.data(), sample.data() + n);
    std::sort(x.begin(), x.end());
    // W is location invariant; centering near the median keeps the sums
    // well-conditioned when the data has a large common offset.
    const double shift = x[static_cast<std::size_t>(n / 2)];
    for (double& v : x) v -= shift;

    const int n2 = n / 2;
    std::vector<double> a(static_cast<std::size_t>(n2));
    if (n == 3) {
        a[0] = std::sqrt(0.5);
    } else {
        const double an = n;
        const double an25 = an + 0.25;
        double summ2 = 0.0;
        for (int i = 1; i <= n2; ++i) {
            a[static_cast<std::size_t>(i - 1)] = ppnd((i - 0.375) / an25);
            summ2 += a[static_cast<std::size_t>(i - 1)] * a[static_cast<std::size_t>(i - 1)];
        }
        summ2 *= 2.0;
        const double ssumm2 = std::sqrt(summ2);
        const double rsn = 1.0 / std::sqrt(an);
        static constexpr double kC1[6] = {0.0, 0.221157, -0.147981, -2.071190, 4.434685,
                                          -2.706056};
        static constexpr double kC2[6] = {0.0, 0.042981, -0.293762, -1.752461, 5.682633,
                                          -3.582633};
        const double a1 = poly(kC1, 6, rsn) - a[0] / ssumm2;
        int i1;
        double fac;
        if (n > 5) {
            i1 = 3;
            const double a2 = -a[1] / ssumm2 + poly(kC2, 6, rsn);
            fac = std::sqrt((summ2 - 2.0 * a[0] * a[0] - 2.0 * a[1] * a[1]) /
                            (1.0 - 2.0 * a1 * a1 - 2.0 * a2 * a2));
            a[0] = a1;
            a[1] = a2;
        } else {
            i1 = 2;
            fac = std::sqrt((summ2 - 2.0 * a[0] * a[0]) / (1.0 - 2.0 * a1 * a1));
            a[0] = a1;
        }
        for (int i = i1; i <= n2; ++i)
            a[static_cast<std::size_t>(i - 1)] = -a[static_cast<std::size_t>(i - 1)] / fac;
    }

    const double range = x[static_cast<std::size_t>(n - 1)] - x[0];
    if (range < 1e-19) throw NumericError("zero-variance sample");

    // Full weight vector is antisymmetric: -a[i] on the lower half, +a[j] on
    // the upper, 0 in an odd middle. W is the squared correlation between
    // the order statistics and these weights.
    auto weight = [&](int i) -> double {
        const int j = n - 1 - i;
        if (i < j) return -a[static_cast<std::size_t>(i)];
        if (i > j) return a[static_cast<std::size_t>(j)];
        return 0.0;
    };
    double sx = 0.0, sa = 0.0;
    for (int i = 0; i < n; ++i) {
        sx += x[static_cast<std::size_t>(i)] / range;
        sa += weight(i);
    }
    sx /= n;
    sa /= n;
    double ssa = 0.0, ssx = 0.0, sax = 0.0;
    for (int i = 0; i < n; ++i) {
        const double asa = weight(i) - sa;
        const double xsx = x[static_cast<std::size_t>(i)] / range - sx;
        ssa += asa * asa;
        ssx += xsx * xsx;
        sax += asa * xsx;
    }

    // w1 = 1 - W computed directly; the difference form loses digits when W
    // is close to 1 (large n).
    const double ssassx = std::sqrt(ssa * ssx);
    const double w1 = (ssassx - sax) * (ssassx + sax) / (ssa * ssx);
    const double w = 1.0 - w1;

    if (n == 3) {
        constexpr double pi6 = 1.90985931710274;   // 6/pi
        constexpr double stqr = 1.04719755119660;  // asin(sqrt(3/4))
        double p = pi6 * (std::asin(std::sqrt(w)) - stqr);
        if (p < 0.0) p = 0.0;
        if (p > 1.0) p = 1.0;
        return {w, p};
    }

    const double y = std::log(w1);
    if (n <= 11) {
        static constexpr double kG[2] = {-2.273, 0.459};
        static constexpr double kC3[4] = {0.544, -0.39978, 0.025054, -6.714e-4};
        static constexpr double kC4[4] = {1.3822, -0.77857, 0.062767, -0.0020322};
        const double gamma = poly(kG, 2, static_cast<double>(n));
        if (y >= gamma) return {w, 1e-19};  // transform undefined, reject hard
        const double yy = -std::log(gamma - y);
        const double m = poly(kC3, 4, static_cast<double>(n));
        const double s = std::exp(poly(kC4, 4, static_cast<double>(n)));
        return {w, alnorm((yy - m) / s, true)};
    }
    static constexpr double kC5[4] = {-1.5861, -0.31082, -0.083751, 0.0038915};
    static constexpr double kC6[3] = {-0.4803, -0.082676, 0.0030302};
    const double xx = std::log(static_cast<double>(n));
    const double m = poly(kC5, 4, xx);
    const double s = std::exp(poly(kC6, 3, xx));
    return {w, alnorm((y - m) / s, true)};
}

NormalityReport select_min_modes(const std::vector<std::pair<int, Eigen::MatrixXcd>>& modal_sets,
                                 double threshold, bool test_imaginary,
                                 std::uint64_t subsample_seed) {
    if (modal_sets.empty()) throw ConfigError("no modal noise sets given");
    if (threshold <= 0.0 || threshold >= 1.0) throw ConfigError("threshold must be in (0,1)");

    NormalityReport report;
    report.threshold = threshold;
    int prev_size = 0;
    for (const auto& [size, seq] : modal_sets) {
        if (size <= prev_size) throw ConfigError("model sizes must be strictly ascending");
        prev_size = size;
        const Eigen::Index n_coord = seq.rows();
        const Eigen::Index count = seq.cols();
        if (n_coord < 1 || count < 3) throw ConfigError("modal sequence too short to test");

        Eigen::VectorXd p(n_coord);
        for (Eigen::Index i = 0; i < n_coord; ++i) {
            Eigen::VectorXd sample = test_imaginary
                                         ? Eigen::VectorXd(seq.row(i).imag().transpose())
                                         : Eigen::VectorXd(seq.row(i).real().transpose());
            if (count > 5000) {
                Rng rng(subsample_seed,
                        (static_cast<std::uint64_t>(size) << 32) | static_cast<std::uint64_t>(i));
                const std::vector<int> order = rng.permutation(static_cast<int>(count));
                Eigen::VectorXd sub(5000);
                for (int k = 0; k < 5000; ++k) sub(k) = sample(order[static_cast<std::size_t>(k)]);
                sample = std::move(sub);
            }
            try {
                p(i) = shapiro_wilk(sample).p;
            } catch (const NumericError&) {
                p(i) = 0.0;  // point mass, certainly not Gaussian
            }
        }

        report.model_sizes.push_back(size);
        report.means.push_back(p.mean());
        report.medians.push_back(median_of(std::vector<double>(p.data(), p.data() + p.size())));
        report.p_values.push_back(std::move(p));
    }

    for (std::size_t k = 0; k < report.model_sizes.size(); ++k) {
        if (report.means[k] > threshold && report.medians[k] > threshold) {
            report.selected_J = report.model_sizes[k];
            break;
        }
    }
    return report;
}

}  // namespace krom
