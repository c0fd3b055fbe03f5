#include "specbound/wave_heat.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace specbound {

void gauss_legendre(int n, double a, double b, std::vector<double>& nodes,
                    std::vector<double>& weights) {
    nodes.resize(n);
    weights.resize(n);
    for (int i = 0; i < n; ++i) {
        // Newton iteration from the Chebyshev initial guess.
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[i] = 0.5 * (b - a) * x + 0.5 * (a + b);
        weights[i] = (b - a) / ((1.0 - x * x) * pp * pp);
    }
}

double OnDiagProfile::at(int x, double t) const {
    const auto& g = t_grid;
    if (t <= g.front()) return values(x, 0);
    if (t >= g.back()) return values(x, g.size() - 1);
    auto it = std::upper_bound(g.begin(), g.end(), t);
    int hi = int(it - g.begin());
    int lo = hi - 1;
    double w = (t - g[lo]) / (g[hi] - g[lo]);
    return (1.0 - w) * values(x, lo) + w * values(x, hi);
}

OperatorKernel wave_kernel(const SpectralDecomposition& dec, double t) {
    if (t < 0.0) throw std::invalid_argument("wave_kernel: t < 0");
    return kernel_of(apply_function(dec,
                                    [t](double lam) {
                                        return std::cos(t * std::sqrt(lam));
                                    }),
                     dec.space, dec.l);
}

OperatorKernel heat_kernel(const SpectralDecomposition& dec, double t) {
    if (t < 0.0) throw std::invalid_argument("heat_kernel: t < 0");
    return kernel_of(apply_function(
                         dec, [t](double lam) { return std::exp(-t * lam); }),
                     dec.space, dec.l);
}

double eps_support_radius(const OperatorKernel& kernel, double eps) {
    if (eps <= 0.0) throw std::invalid_argument("eps_support_radius: eps <= 0");
    const int n = kernel.space->n;
    double threshold = eps * kernel.max_block_norm();
    double radius = 0.0;
#pragma omp parallel for reduction(max : radius) schedule(static)
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            if (kernel.block_op_norm(x, y) > threshold)
                radius = std::max(radius, kernel.space->rho(x, y));
    return radius;
}

CheckReport propagation_speed_estimate(const SpectralDecomposition& dec,
                                       const std::vector<double>& t_grid,
                                       double eps) {
    if (t_grid.size() < 3)
        throw std::invalid_argument(
            "propagation_speed_estimate: need at least 3 grid times");
    CheckReport report;
    report.check_name = "propagation_speed";
    report.table_header = {"t", "support_radius"};

    std::vector<double> radii;
    for (double t : t_grid) {
        double r = eps_support_radius(wave_kernel(dec, t), eps);
        radii.push_back(r);
        report.table.push_back({t, r});
    }

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double m = double(t_grid.size());
    for (size_t i = 0; i < t_grid.size(); ++i) {
        sx += t_grid[i];
        sy += radii[i];
        sxx += t_grid[i] * t_grid[i];
        sxy += t_grid[i] * radii[i];
    }
    double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);

    // Stability: incremental slopes over the upper half of the grid.
    bool stable = std::isfinite(slope);
    size_t half = t_grid.size() / 2;
    for (size_t i = std::max<size_t>(half, 1); i < t_grid.size(); ++i) {
        double inc = (radii[i] - radii[i - 1]) / (t_grid[i] - t_grid[i - 1]);
        if (slope == 0.0) {
            if (inc != 0.0) stable = false;
        } else if (std::abs(inc - slope) > 0.10 * std::abs(slope)) {
            stable = false;
        }
    }

    report.observed_constant = slope;
    report.threshold = 0.10;
    report.pass = stable;
    report.details["eps"] = eps;
    report.grid = t_grid;
    return report;
}

CheckReport davies_gaffney_check(const SpectralDecomposition& dec,
                                 const std::vector<PairProbe>& pairs,
                                 double constant) {
    CheckReport report;
    report.check_name = "davies_gaffney";
    report.table_header = {"x", "y", "t", "rho", "ratio"};

    std::map<double, OperatorKernel> kernels;
    for (const auto& p : pairs) {
        if (p.t <= 0.0)
            throw std::invalid_argument("davies_gaffney_check: t <= 0");
        if (!kernels.count(p.t)) kernels.emplace(p.t, heat_kernel(dec, p.t));
    }

    const auto& mu = dec.space->mu;
    // The Gaussian comparison is meaningful only inside the propagation
    // cone rho <= 2 sqrt(||L||) t; beyond it the discrete kernel decays
    // like e^{-rho log(rho/t)}, which is far above e^{-rho^2/4t}.
    const double cone = 2.0 * std::sqrt(std::max(dec.spectral_radius(), 0.0));
    int skipped = 0;
    double max_ratio = 0.0;
    for (const auto& p : pairs) {
        const auto& k = kernels.at(p.t);
        double rho = dec.space->rho(p.x, p.y);
        if (rho > cone * p.t + 1e-12) {
            ++skipped;
            continue;
        }
        // <exp(-tL) d_y, d_x> for normalized point masses reduces to
        // |K(x,y)| sqrt(mu(x) mu(y)) in the block operator norm.
        double inner =
            k.block_op_norm(p.x, p.y) * std::sqrt(mu(p.x) * mu(p.y));
        double ratio = inner / std::exp(-rho * rho / (4.0 * p.t));
        max_ratio = std::max(max_ratio, ratio);
        report.table.push_back({double(p.x), double(p.y), p.t, rho, ratio});
    }

    report.observed_constant = max_ratio;
    report.threshold = constant;
    report.pass = max_ratio <= constant;
    report.details["probes_outside_cone"] = skipped;
    return report;
}

CheckReport subordination_check(const SpectralDecomposition& dec, double s,
                                int nodes) {
    if (s <= 0.0) throw std::invalid_argument("subordination_check: s <= 0");
    if (nodes < 16)
        throw std::invalid_argument("subordination_check: need >= 16 nodes");

    CheckReport report;
    report.check_name = "subordination";
    const double tol = 1e-6;
    // Truncation at T keeps the Gaussian tail below half the threshold.
    const double T = 2.0 * std::sqrt(s * std::log(4.0 / tol)) * 1.1;

    std::vector<double> tq, wq;
    gauss_legendre(nodes, 0.0, T, tq, wq);

    const int dim = dec.dim();
    Eigen::VectorXd recon(dim);
    for (int i = 0; i < dim; ++i) {
        double lam = dec.eigenvalues(i);
        double sl = std::sqrt(lam);
        double acc = 0.0;
        for (int q = 0; q < nodes; ++q)
            acc += wq[q] * std::cos(tq[q] * sl) *
                   std::exp(-tq[q] * tq[q] / (4.0 * s));
        recon(i) = acc / std::sqrt(M_PI * s);
    }

    Eigen::VectorXd w(dim);
    for (int x = 0; x < dec.space->n; ++x)
        for (int i = 0; i < dec.l; ++i)
            w(x * dec.l + i) = dec.space->mu(x);
    MatrixXc approx =
        dec.basis * recon.asDiagonal() * dec.basis.adjoint() * w.asDiagonal();

    auto k_approx = kernel_of(approx, dec.space, dec.l);
    auto k_direct = heat_kernel(dec, s);
    double dev = (k_approx.blocks - k_direct.blocks).cwiseAbs().maxCoeff();

    report.observed_constant = dev;
    report.threshold = tol;
    report.pass = dev <= tol;
    report.details["s"] = s;
    report.details["nodes"] = nodes;
    report.details["truncation_T"] = T;
    if (!report.pass) report.details["node_count_suggestion"] = 2 * nodes;
    return report;
}

namespace {

OnDiagProfile make_profile(const SpectralDecomposition& dec,
                           const std::vector<double>& t_grid,
                           OnDiagProfile::Choice choice, int N,
                           BlockNorm norm) {
    OnDiagProfile profile;
    profile.choice = choice;
    profile.resolvent_power = N;
    profile.t_grid = t_grid;
    const int n = dec.space->n;
    profile.values.resize(n, t_grid.size());
    profile.volume_column.resize(n, t_grid.size());
    for (size_t k = 0; k < t_grid.size(); ++k) {
        double t = t_grid[k];
        OperatorKernel kernel =
            choice == OnDiagProfile::Choice::Resolvent
                ? kernel_of(apply_function(dec,
                                           [t, N](double lam) {
                                               return std::pow(
                                                   1.0 + t * t * lam,
                                                   -N / 4.0);
                                           }),
                            dec.space, dec.l)
                : heat_kernel(dec, t);
        profile.values.col(k) = row_l2_norms_all(kernel, norm);
        double ball_r = choice == OnDiagProfile::Choice::Resolvent
                            ? t
                            : std::sqrt(t);
        for (int x = 0; x < n; ++x)
            profile.volume_column(x, k) =
                1.0 / std::sqrt(dec.space->ball_measure(x, ball_r));
    }
    return profile;
}

} // namespace

OnDiagProfile resolvent_profile(const SpectralDecomposition& dec,
                                const std::vector<double>& t_grid, int N,
                                BlockNorm norm) {
    if (N < 1) throw std::invalid_argument("resolvent_profile: N < 1");
    return make_profile(dec, t_grid, OnDiagProfile::Choice::Resolvent, N,
                        norm);
}

OnDiagProfile heat_profile(const SpectralDecomposition& dec,
                           const std::vector<double>& t_grid,
                           BlockNorm norm) {
    return make_profile(dec, t_grid, OnDiagProfile::Choice::Heat, 0, norm);
}

double ellip_quadrature_constant(double m, double D) {
    // (1/Gamma(m/4)) int_0^inf e^{-s} s^{m/4-1} (1+1/s)^{D/4} ds.
    // Near 0 the integrand behaves like s^{(m-D)/4 - 1}; substitute
    // s = u^q with q = 8/(m-D) to remove the singularity, then integrate
    // the smooth tail on [1, 40].
    auto f = [m, D](double s) {
        return std::exp(-s) * std::pow(s, m / 4.0 - 1.0) *
               std::pow(1.0 + 1.0 / s, D / 4.0);
    };
    const double q = 8.0 / (m - D);
    std::vector<double> x, w;
    gauss_legendre(400, 0.0, 1.0, x, w);
    double head = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        double s = std::pow(x[i], q);
        head += w[i] * f(s) * q * std::pow(x[i], q - 1.0);
    }
    gauss_legendre(400, 1.0, 40.0, x, w);
    double tail = 0.0;
    for (size_t i = 0; i < x.size(); ++i) tail += w[i] * f(x[i]);
    return (head + tail) / std::tgamma(m / 4.0);
}

CheckReport ellip_equivalence_check(const SpectralDecomposition& dec,
                                    const std::vector<double>& t_grid,
                                    double m, double D) {
    if (!(m > D))
        throw std::invalid_argument(
            "ellip_equivalence_check: requires m > D");

    CheckReport report;
    report.check_name = "ellip_equivalence";
    report.table_header = {"t", "ratio_a", "ratio_b"};

    const double c_a = ellip_quadrature_constant(m, D);
    const double c_b = std::sqrt(double(dec.l)) * std::exp(-(m - 1.0)) *
                       std::pow(m, m); // sup e^{-u}(1+u)^m at u = m-1
    double ratio_a = 0.0, ratio_b = 0.0;

    for (double t : t_grid) {
        auto k_res = kernel_of(
            apply_function(dec,
                           [t, m](double lam) {
                               return std::pow(1.0 + t * lam, -m / 4.0);
                           }),
            dec.space, dec.l);
        auto k_resm = kernel_of(
            apply_function(dec,
                           [t, m](double lam) {
                               return std::pow(1.0 + t * lam, -m);
                           }),
            dec.space, dec.l);
        auto k_heat = heat_kernel(dec, t);
        Eigen::VectorXd rows_res =
            row_l2_norms_all(k_res, BlockNorm::Operator);
        Eigen::VectorXd rows_resm =
            row_l2_norms_all(k_resm, BlockNorm::Operator);
        Eigen::VectorXd rows_heat =
            row_l2_norms_all(k_heat, BlockNorm::Operator);
        double ra = 0.0, rb = 0.0;
        for (int x = 0; x < dec.space->n; ++x) {
            ra = std::max(ra, rows_res(x) / rows_heat(x));
            rb = std::max(rb, rows_heat(x) / rows_resm(x));
        }
        ratio_a = std::max(ratio_a, ra);
        ratio_b = std::max(ratio_b, rb);
        report.table.push_back({t, ra, rb});
    }

    report.details["constant_a"] = c_a;
    report.details["constant_b"] = c_b;
    report.details["ratio_a"] = ratio_a;
    report.details["ratio_b"] = ratio_b;
    report.observed_constant =
        std::max(ratio_a / c_a, ratio_b / c_b);
    report.threshold = 1.0 + 1e-6;
    report.pass = report.observed_constant <= report.threshold;
    return report;
}

} // namespace specbound
