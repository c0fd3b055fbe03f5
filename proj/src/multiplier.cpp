#include "specbound/multiplier.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace specbound {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Cumulative table of a normalized bump, shared by the smooth step and the
// mollifier.  bump(u) = exp(-1/(u(1-u))) on (0,1); the table holds the
// normalized running integral, so entry(1) = 1.
struct CumulativeBump {
    std::vector<double> u, c;
    CumulativeBump() {
        const int n = 20000;
        u.resize(n + 1);
        c.resize(n + 1);
        double acc = 0.0;
        double prev = 0.0;
        u[0] = 0.0;
        c[0] = 0.0;
        for (int i = 1; i <= n; ++i) {
            u[i] = static_cast<double>(i) / n;
            double ui = u[i];
            double b = (ui <= 0.0 || ui >= 1.0)
                           ? 0.0
                           : std::exp(-1.0 / (ui * (1.0 - ui)));
            acc += 0.5 * (prev + b) / n;
            prev = b;
            c[i] = acc;
        }
        for (double& v : c) v /= acc;
    }
    double operator()(double x) const {
        if (x <= 0.0) return 0.0;
        if (x >= 1.0) return 1.0;
        double p = x * (u.size() - 1);
        int i = static_cast<int>(p);
        double w = p - i;
        return c[i] * (1.0 - w) + c[i + 1] * w;
    }
};

const CumulativeBump& cumulative_bump() {
    static const CumulativeBump table;
    return table;
}

double sinc(double x) {
    if (std::abs(x) < 1e-8) return 1.0 - x * x / 6.0;
    return std::sin(x) / x;
}

// Gevrey-type bump exp(-1/(1-t^2)^3) on (-1,1): compactly supported with a
// transform decaying like exp(-c x^{3/4}), fast enough that the multiplier
// tail at lambda ~ 50 stays below the lambda^{-2 alpha} asymptote tolerance.
double phi_bump(double t) {
    if (std::abs(t) >= 1.0) return 0.0;
    double d = 1.0 - t * t;
    return std::exp(-1.0 / (d * d * d));
}

struct GaussLegendreRule {
    std::vector<double> nodes, weights; // on [-1, 1]
};

GaussLegendreRule gauss_legendre_rule(int n) {
    GaussLegendreRule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int k = 0; k < n; ++k) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * k + 1.0) * x * p1 - k * p2) / (k + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        r.nodes[i] = x;
        r.weights[i] = 2.0 / ((1.0 - x * x) * pp * pp);
    }
    return r;
}

} // namespace

double SampledEvenFunction::operator()(double x) const {
    x = std::abs(x);
    if (x >= T) return values(n());
    double p = x / step();
    int i = static_cast<int>(p);
    double w = p - i;
    return values(i) * (1.0 - w) + values(i + 1) * w;
}

double filon_cos(const double* f, int n, double x0, double h, double t) {
    if (n < 2 || n % 2 != 0)
        throw std::invalid_argument("filon_cos: need an even panel count");
    double th = t * h;
    double alpha, beta, gamma;
    if (std::abs(th) < 1e-3) {
        // Small-angle Taylor forms of the Filon weights (the closed forms
        // cancel catastrophically as th -> 0).
        alpha = th * th * th * 2.0 / 45.0;
        beta = 2.0 / 3.0 + 2.0 * th * th / 15.0;
        gamma = 4.0 / 3.0 - 2.0 * th * th / 15.0;
    } else {
        double s = std::sin(th), c = std::cos(th);
        alpha = (th * th + th * s * c - 2.0 * s * s) / (th * th * th);
        beta = 2.0 * (th * (1.0 + c * c) - 2.0 * s * c) / (th * th * th);
        gamma = 4.0 * (s - th * c) / (th * th * th);
    }
    double ce = 0.0, codd = 0.0;
    for (int i = 0; i <= n; i += 2) ce += f[i] * std::cos(t * (x0 + i * h));
    ce -= 0.5 * (f[0] * std::cos(t * x0) + f[n] * std::cos(t * (x0 + n * h)));
    for (int i = 1; i < n; i += 2) codd += f[i] * std::cos(t * (x0 + i * h));
    double bnd = f[n] * std::sin(t * (x0 + n * h)) - f[0] * std::sin(t * x0);
    return h * (alpha * bnd + beta * ce + gamma * codd);
}

double filon_cos(const Eigen::VectorXd& f, double x0, double h, double t) {
    return filon_cos(f.data(), static_cast<int>(f.size()) - 1, x0, h, t);
}

double power_cosine_tail(double t, double L, double q, int terms) {
    // int_L^inf lam^{-q} cos(t lam) d lam
    //   = sum_k (-1)^{k+1} [ f^{(2k)}(L) sin(tL) / t^{2k+1}
    //                      + f^{(2k+1)}(L) cos(tL) / t^{2k+2} ]
    // with f(lam) = lam^{-q}.
    double s = std::sin(t * L), c = std::cos(t * L);
    double acc = 0.0;
    double fj = std::pow(L, -q);
    double sign = -1.0;
    int jd = 0;
    for (int k = 0; k < terms; ++k) {
        double f2k = fj;
        double f2k1 = fj * -(q + jd) / L;
        acc += sign * (f2k * s / std::pow(t, 2 * k + 1) +
                       f2k1 * c / std::pow(t, 2 * k + 2));
        fj = f2k1 * -(q + jd + 1) / L;
        jd += 2;
        sign = -sign;
    }
    return acc;
}

SampledEvenFunction transform_even(const SampledEvenFunction& f, double T_out,
                                   int n_out, double boundary_tol) {
    if (f.n() < 2 || f.n() % 2 != 0)
        throw std::invalid_argument("transform_even: need an even sample count");
    double peak = f.values.cwiseAbs().maxCoeff();
    double edge = std::max(std::abs(f.values(f.n())),
                           std::abs(f.values(f.n() - 1)));
    if (peak > 0.0 && edge > boundary_tol * peak) {
        std::ostringstream msg;
        msg << "transform_even: window too small (boundary mass "
            << edge / peak << " of peak); suggest T = " << 2.0 * f.T;
        throw std::runtime_error(msg.str());
    }
    SampledEvenFunction out;
    out.T = T_out;
    out.values.resize(n_out + 1);
    double h = f.step();
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int k = 0; k <= n_out; ++k) {
        double lam = T_out * k / n_out;
        out.values(k) = 2.0 * filon_cos(f.values, 0.0, h, lam);
    }
    return out;
}

SampledEvenFunction transform_even(const SampledEvenFunction& f) {
    return transform_even(f, f.T, f.n());
}

double declared_support_leakage(const SampledEvenFunction& f) {
    if (f.declared_ft_support <= 0.0)
        throw std::invalid_argument("declared_support_leakage: no declared support");
    double r = f.declared_ft_support;
    double h = f.step();
    double peak = 0.0, outside = 0.0;
    int n_in = 256, n_out = 256;
    for (int k = 0; k <= n_in; ++k) {
        double lam = r * k / n_in;
        peak = std::max(peak, std::abs(2.0 * filon_cos(f.values, 0.0, h, lam)));
    }
    double span = std::max(5.0, r);
    for (int k = 0; k <= n_out; ++k) {
        double lam = r * 1.02 + span * k / n_out;
        outside =
            std::max(outside, std::abs(2.0 * filon_cos(f.values, 0.0, h, lam)));
    }
    return peak > 0.0 ? outside / peak : 0.0;
}

BandLimitedResult apply_band_limited(const SpectralDecomposition& dec,
                                     const SampledEvenFunction& fhat,
                                     int nodes, double eps) {
    if (fhat.declared_ft_support <= 0.0)
        throw std::invalid_argument("apply_band_limited: declared_ft_support unset");
    double r = fhat.declared_ft_support;
    double omega = std::sqrt(std::max(0.0, dec.spectral_radius()));
    int min_nodes = static_cast<int>(r * omega / kPi) + 8;
    if (nodes < min_nodes) {
        std::ostringstream msg;
        msg << "apply_band_limited: " << nodes
            << " nodes undersample cos(t sqrt(L)) on [0, " << r
            << "] at spectral radius " << dec.spectral_radius() << "; need >= "
            << min_nodes;
        throw std::runtime_error(msg.str());
    }
    auto rule = gauss_legendre_rule(nodes);
    MatrixXc acc = MatrixXc::Zero(dec.dim(), dec.dim());
    for (int i = 0; i < nodes; ++i) {
        double t = 0.5 * r * (rule.nodes[i] + 1.0);
        double w = 0.5 * r * rule.weights[i];
        double coeff = w * fhat(t) / kPi;
        acc += coeff * apply_function(dec, [t](double lam) {
                   return std::cos(t * std::sqrt(std::max(0.0, lam)));
               });
    }
    BandLimitedResult res;
    res.matrix = acc;
    res.quadrature_step = r / nodes;
    res.support_radius = eps_support_radius(kernel_of(acc, dec.space, dec.l), eps);
    return res;
}

double smooth_step(double u) {
    // 0 below -1, 1 above -1/2: rescale [-1, -1/2] onto [0, 1].
    return cumulative_bump()((u + 1.0) * 2.0);
}

double mollifier(double u) {
    // 1 on [-1/4, 1/4], 0 outside [-1/2, 1/2].
    return 1.0 - cumulative_bump()((std::abs(u) - 0.25) * 4.0);
}

double Gl2Family::gaussian(double x) const {
    return std::exp(-x * x / 4.0) / (2.0 * std::sqrt(kPi));
}

Gl2Family build_gl2_family(double s, int n_x, int n_lambda) {
    if (s <= 1.0) throw std::invalid_argument("build_gl2_family: need s > 1");
    Gl2Family fam;
    fam.s = s;
    fam.T = s + 30.0;
    fam.x_grid.resize(n_x + 1);
    fam.F_s.resize(n_x + 1);
    fam.R_s.resize(n_x + 1);
    fam.phi_s.resize(n_x + 1);
    for (int i = 0; i <= n_x; ++i) {
        double x = fam.T * i / n_x;
        double g = fam.gaussian(x);
        double p = smooth_step(s * (std::abs(x) - s));
        fam.x_grid(i) = x;
        fam.phi_s(i) = p;
        fam.F_s(i) = p * g;
        fam.R_s(i) = (1.0 - p) * g;
    }
    double lam_max = 8.0 * s;
    fam.lambda_grid.resize(n_lambda + 1);
    fam.F_hat.resize(n_lambda + 1);
    double h = fam.T / n_x;
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int k = 0; k <= n_lambda; ++k) {
        double lam = lam_max * k / n_lambda;
        fam.lambda_grid(k) = lam;
        fam.F_hat(k) = 2.0 * filon_cos(fam.F_s, 0.0, h, lam);
    }
    return fam;
}

double osz_constant(const Gl2Family& family, int N) {
    double s = family.s;
    double best = 0.0;
    for (int k = 0; k < family.lambda_grid.size(); ++k) {
        double lam = family.lambda_grid(k);
        double v = std::abs(family.F_hat(k)) * s *
                   std::pow(1.0 + lam * lam / (s * s), 0.5 * N) *
                   std::exp(s * s / 4.0);
        best = std::max(best, v);
    }
    return best;
}

CheckReport verify_osz_decay(const Gl2Family& family, int N) {
    CheckReport rep;
    rep.check_name = "osz_decay";
    std::vector<double> svals = {2.0, 4.0, 8.0};
    std::vector<double> consts;
    rep.table_header = {"s", "observed_CN"};
    for (double sv : svals) {
        double c = (sv == family.s)
                       ? osz_constant(family, N)
                       : osz_constant(build_gl2_family(
                             sv, static_cast<int>(family.x_grid.size()) - 1,
                             static_cast<int>(family.lambda_grid.size()) - 1),
                             N);
        consts.push_back(c);
        rep.table.push_back({sv, c});
        rep.grid.push_back(sv);
    }
    std::vector<double> sorted = consts;
    std::sort(sorted.begin(), sorted.end());
    double median = sorted[sorted.size() / 2];
    double worst = 0.0;
    for (double c : consts)
        worst = std::max(worst, std::abs(c - median) / median);
    rep.observed_constant = osz_constant(family, N);
    rep.threshold = 0.20;
    rep.pass = worst <= 0.20;
    rep.details["N"] = N;
    rep.details["relative_spread"] = worst;
    rep.details["median"] = median;
    return rep;
}

double PhiFamily::operator()(double x) const {
    // Phi(x) = (1/pi) int_0^1 Phi-hat(t) cos(xt) dt, even extension.
    double h = 1.0 / (static_cast<double>(t_grid.size()) - 1.0);
    return filon_cos(phi_hat, 0.0, h, x) / kPi;
}

double PhiFamily::hat(double t) const {
    t = std::abs(t);
    if (t >= 1.0) return 0.0;
    double p = t * (t_grid.size() - 1);
    int i = static_cast<int>(p);
    double w = p - i;
    return phi_hat(i) * (1.0 - w) + phi_hat(i + 1) * w;
}

PhiFamily build_phi_family(int K, int n_grid) {
    if (K < 0) throw std::invalid_argument("build_phi_family: need K >= 0");
    if (n_grid % 2 != 0) ++n_grid;
    PhiFamily fam;
    fam.K = K;
    fam.t_grid.resize(n_grid + 1);
    for (int i = 0; i <= n_grid; ++i)
        fam.t_grid(i) = static_cast<double>(i) / n_grid;
    fam.phi_hat.resize(n_grid + 1);
    if (K == 0) {
        // Classical Fejer pair: triangle <-> squared sinc.
        for (int i = 0; i <= n_grid; ++i)
            fam.phi_hat(i) = 2.0 * kPi * (1.0 - fam.t_grid(i));
        return fam;
    }
    int nb = K / 2 + 1;
    fam.bump_dilations.resize(nb);
    for (int k = 0; k < nb; ++k)
        fam.bump_dilations[k] =
            nb > 1 ? 1.0 - 0.25 * k / (nb - 1) : 1.0;
    // Even moment system against the half-grid (moments are even in t):
    // row 0: int_{-1}^{1} Phi-hat = 2 pi; row l: int t^{2l} Phi-hat = 0.
    Eigen::MatrixXd M(nb, nb);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nb);
    rhs(0) = 2.0 * kPi;
    double h = 1.0 / n_grid;
    for (int c = 0; c < nb; ++c) {
        double a = fam.bump_dilations[c];
        for (int l = 0; l < nb; ++l) {
            double acc = 0.0;
            for (int i = 0; i <= n_grid; ++i) {
                double t = fam.t_grid(i);
                double v = phi_bump(t / a) * std::pow(t, 2 * l);
                acc += (i == 0 || i == n_grid) ? 0.5 * v : v;
            }
            M(l, c) = 2.0 * acc * h; // even reflection doubles the half-grid
        }
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(
        M, Eigen::ComputeFullU | Eigen::ComputeFullV);
    double smin = svd.singularValues()(nb - 1);
    double smax = svd.singularValues()(0);
    if (smin <= 0.0 || smax / smin > 1e12) {
        std::ostringstream msg;
        msg << "build_phi_family: moment system singular for K = " << K
            << " with " << nb << " bumps; suggest " << nb + 1 << " bumps";
        throw std::runtime_error(msg.str());
    }
    Eigen::VectorXd coef = svd.solve(rhs);
    fam.bump_coeffs.assign(coef.data(), coef.data() + nb);
    for (int i = 0; i <= n_grid; ++i) {
        double t = fam.t_grid(i);
        double v = 0.0;
        for (int k = 0; k < nb; ++k)
            v += coef(k) * phi_bump(t / fam.bump_dilations[k]);
        fam.phi_hat(i) = v;
    }
    return fam;
}

double riesz_symbol(const PhiFamily& phi, double alpha, double lam) {
    if (lam <= 0.0) return 0.0;
    return std::pow(lam, -2.0 * alpha) * (1.0 - phi(lam));
}

// Shared heavy tables for a Riesz tail family: the symbol G sampled on a
// composite grid reaching lambda = 2^20 (so the transform can include the
// analytic power-law tail beyond it) and Ghat on a uniform t-grid.
struct RieszTailCore {
    double alpha;
    int m, K;
    PhiFamily phi;
    double t0 = 0.25, t1 = 128.0;
    int nt = 25600;
    Eigen::VectorXd t_grid, G_hat;

    struct Segment {
        double a, h;
        Eigen::VectorXd f;
    };
    std::vector<Segment> segments;
    double lam_cut; // start of the analytic tail

    double ghat_at(double t) const {
        double p = (t - t0) / (t1 - t0) * nt;
        int i = std::clamp(static_cast<int>(p), 0, nt - 1);
        double w = p - i;
        return G_hat(i) * (1.0 - w) + G_hat(i + 1) * w;
    }
};

namespace {

std::shared_ptr<const RieszTailCore> build_riesz_core(double alpha, int m,
                                                      int K,
                                                      const PhiFamily& phi) {
    auto core = std::make_shared<RieszTailCore>();
    core->alpha = alpha;
    core->m = m;
    core->K = K;
    core->phi = phi;
    // Composite sampling of G: fine on [0, 64], then one panel per octave
    // out to 2^20 where G is smooth and slowly varying.
    std::vector<std::tuple<double, double, int>> spans;
    spans.emplace_back(0.0, 64.0, 32768);
    for (double L = 64.0; L < 1048576.0; L *= 2.0)
        spans.emplace_back(L, 2.0 * L, 4096);
    core->lam_cut = 1048576.0;
    core->segments.resize(spans.size());
    for (size_t siidx = 0; siidx < spans.size(); ++siidx) {
        auto [a, b, n] = spans[siidx];
        auto& seg = core->segments[siidx];
        seg.a = a;
        seg.h = (b - a) / n;
        seg.f.resize(n + 1);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
        for (int i = 0; i <= n; ++i)
            seg.f(i) = riesz_symbol(phi, alpha, a + i * seg.h);
    }
    core->t_grid.resize(core->nt + 1);
    core->G_hat.resize(core->nt + 1);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 64)
#endif
    for (int k = 0; k <= core->nt; ++k) {
        double t = core->t0 + (core->t1 - core->t0) * k / core->nt;
        double acc = 0.0;
        for (const auto& seg : core->segments)
            acc += filon_cos(seg.f, seg.a, seg.h, t);
        acc += power_cosine_tail(t, core->lam_cut, 2.0 * alpha);
        core->t_grid(k) = t;
        core->G_hat(k) = 2.0 * acc;
    }
    return core;
}

// F_j on a lambda grid: (1/pi) int Ghat(t) (1 - mollifier(2^{-j} t)) cos(lam t) dt.
Eigen::VectorXd riesz_tail_F(const RieszTailCore& core, int j,
                             const Eigen::VectorXd& lam_grid) {
    double scale = std::pow(2.0, j);
    Eigen::VectorXd w(core.nt + 1);
    for (int k = 0; k <= core.nt; ++k)
        w(k) = core.G_hat(k) * (1.0 - mollifier(core.t_grid(k) / scale));
    double h = (core.t1 - core.t0) / core.nt;
    Eigen::VectorXd F(lam_grid.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int i = 0; i < lam_grid.size(); ++i)
        F(i) = filon_cos(w, core.t0, h, lam_grid(i)) / kPi;
    return F;
}

} // namespace

RieszTailFamily build_riesz_tail_family(double alpha, int j, int m, int K,
                                        int n_lambda, double lambda_max) {
    if (alpha <= 0.0)
        throw std::invalid_argument("build_riesz_tail_family: need alpha > 0");
    if (j < 1 || m < 1)
        throw std::invalid_argument("build_riesz_tail_family: need j >= 1, m >= 1");
    PhiFamily phi = build_phi_family(K);
    if (phi.vanishing_order() <= 2.0 * alpha) {
        std::ostringstream msg;
        msg << "build_riesz_tail_family: K = " << K
            << " too small for alpha = " << alpha
            << "; the multiplier must satisfy Phi^(l)(0) = 0 to order > "
            << 2.0 * alpha << " so that lambda^{-2 alpha}(1 - Phi) stays "
            << "bounded near 0";
        throw std::runtime_error(msg.str());
    }
    RieszTailFamily fam;
    fam.alpha = alpha;
    fam.j = j;
    fam.m = m;
    fam.K = K;
    fam.phi = phi;
    fam.core = build_riesz_core(alpha, m, K, phi);
    fam.lambda_grid.resize(n_lambda + 1);
    for (int i = 0; i <= n_lambda; ++i)
        fam.lambda_grid(i) = lambda_max * i / n_lambda;
    fam.G.resize(n_lambda + 1);
    for (int i = 0; i <= n_lambda; ++i)
        fam.G(i) = riesz_symbol(phi, alpha, fam.lambda_grid(i));
    fam.F_j = riesz_tail_F(*fam.core, j, fam.lambda_grid);
    fam.R_j = fam.G - fam.F_j;
    fam.J_j.resize(n_lambda + 1);
    double twoj = std::pow(4.0, j);
    for (int i = 0; i <= n_lambda; ++i) {
        double lam = fam.lambda_grid(i);
        fam.J_j(i) = std::pow(1.0 + twoj * lam * lam, m) *
                     std::pow(lam, 2.0 * alpha) * fam.F_j(i);
    }
    return fam;
}

CheckReport verify_pom_estimate(const RieszTailFamily& family) {
    CheckReport rep;
    rep.check_name = "pom_estimate";
    const auto& core = *family.core;
    std::vector<double> sups;
    rep.table_header = {"j", "sup_J", "sup_J_times_2j"};
    double pom_constant = 0.0;
    for (int j = 1; j <= 6; ++j) {
        Eigen::VectorXd F = riesz_tail_F(core, j, family.lambda_grid);
        double sup = 0.0;
        double twoj = std::pow(4.0, j);
        for (int i = 0; i < family.lambda_grid.size(); ++i) {
            double lam = family.lambda_grid(i);
            sup = std::max(sup, std::abs(std::pow(1.0 + twoj * lam * lam,
                                                  family.m) *
                                         std::pow(lam, 2.0 * family.alpha) *
                                         F(i)));
        }
        sups.push_back(sup);
        pom_constant = std::max(pom_constant, sup * std::pow(2.0, j));
        rep.table.push_back({static_cast<double>(j), sup,
                             sup * std::pow(2.0, j)});
        rep.grid.push_back(static_cast<double>(j));
    }
    double max_ratio = 0.0;
    for (size_t i = 1; i < sups.size(); ++i)
        max_ratio = std::max(max_ratio, sups[i] / sups[i - 1]);
    rep.observed_constant = max_ratio;
    rep.threshold = 0.6;
    rep.pass = max_ratio <= 0.6 && std::isfinite(pom_constant);
    rep.details["pom_constant"] = pom_constant;
    rep.details["alpha"] = family.alpha;
    rep.details["m"] = family.m;
    rep.details["K"] = family.K;
    return rep;
}

} // namespace specbound
