#ifndef SPECBOUND_MULTIPLIER_HPP
#define SPECBOUND_MULTIPLIER_HPP

#include <memory>
#include <vector>

#include "specbound/wave_heat.hpp"

namespace specbound {

/// Even function sampled on the uniform half-grid {k*T/n : 0 <= k <= n};
/// the negative axis is implied by evenness.
struct SampledEvenFunction {
    double T = 0.0;
    Eigen::VectorXd values;        // n+1 samples on [0, T]
    double declared_ft_support = -1.0; // radius r, or < 0 if undeclared

    int n() const { return static_cast<int>(values.size()) - 1; }
    double step() const { return T / n(); }
    double operator()(double x) const; // linear interpolation, even in x
};

/// Filon-type quadrature for int_{x0}^{x0+n*h} f(x) cos(t x) dx with f
/// sampled at n+1 equispaced points (n even).  Exact for cos factors of
/// any frequency against piecewise parabolic f, so the error does not
/// grow with t.
double filon_cos(const double* f, int n, double x0, double h, double t);
double filon_cos(const Eigen::VectorXd& f, double x0, double h, double t);

/// int_L^inf lam^{-q} cos(t lam) d lam by repeated integration by parts;
/// accurate to machine precision once t*L >> q.
double power_cosine_tail(double t, double L, double q, int terms = 8);

/// Even Fourier transform g(t) = 2 int_0^T f(x) cos(t x) dx, sampled on
/// [0, T_out].  transform_even(transform_even(f)) = 2*pi*f when both
/// windows capture the decay.  Throws "window too small" when the
/// boundary samples carry more than `boundary_tol` of the peak.
SampledEvenFunction transform_even(const SampledEvenFunction& f,
                                   double T_out, int n_out,
                                   double boundary_tol = 1e-12);
SampledEvenFunction transform_even(const SampledEvenFunction& f);

/// Largest |transform(f)| outside [-r, r], as a fraction of the peak;
/// used to audit declared_ft_support.
double declared_support_leakage(const SampledEvenFunction& f);

/// F(sqrt(L)) = (1/pi) int_0^r fhat(t) cos(t sqrt L) dt by Gauss-Legendre
/// quadrature against wave propagators.  Throws when `nodes` undersamples
/// the oscillation cos(t*sqrt(spectral radius)) (Nyquist check).
struct BandLimitedResult {
    Eigen::MatrixXcd matrix;
    double support_radius;   // eps-support radius of the result
    double quadrature_step;
};
BandLimitedResult apply_band_limited(const SpectralDecomposition& dec,
                                     const SampledEvenFunction& fhat,
                                     int nodes, double eps = 1e-10);

/// Smooth step: exactly 0 below -1, exactly 1 above -1/2, monotone between
/// (normalized integral of a bump supported on [-1, -1/2]).
double smooth_step(double u);

/// Mollifier: even, exactly 1 on [-1/4, 1/4], exactly 0 outside
/// [-1/2, 1/2], smooth between.
double mollifier(double u);

/// Gaussian truncation family at scale s:
///   phi_s(x) = smooth_step(s(|x| - s)),
///   F_s = phi_s * g,  R_s = (1 - phi_s) * g,  g(x) = (4 pi)^{-1/2} e^{-x^2/4},
/// so R_s is supported in [-s + 1/(2s), s - 1/(2s)] and Fhat_s + Rhat_s
/// = e^{-lambda^2}.
struct Gl2Family {
    double s = 0.0;
    double T = 0.0;          // sample window for x
    Eigen::VectorXd x_grid;  // [0, T]
    Eigen::VectorXd F_s, R_s, phi_s;
    Eigen::VectorXd lambda_grid; // [0, lambda_max]
    Eigen::VectorXd F_hat;       // transform samples of F_s

    double gaussian(double x) const;
};
Gl2Family build_gl2_family(double s, int n_x = 8192, int n_lambda = 2048);

/// Observed C'_N = sup_lambda |Fhat_s| * s * (1 + lambda^2/s^2)^{N/2}
/// * e^{s^2/4}.  Passes iff the value for family.s and the values rebuilt
/// at s in {2, 4, 8} all sit within +-20% of their median.
CheckReport verify_osz_decay(const Gl2Family& family, int N);
double osz_constant(const Gl2Family& family, int N);

/// Band-limited kernel multiplier Phi: Phi(0) = 1, Phi-hat supported in
/// [-1, 1] and built as a linear combination of dilated smooth bumps
/// solving the even moment system (int Phi-hat = 2 pi, int t^{2l} Phi-hat
/// = 0 for 1 <= l <= floor(K/2)); for K = 0 the classical Fejer pair
/// (triangle, squared sinc) is used.
struct PhiFamily {
    int K = 0;
    Eigen::VectorXd t_grid;   // uniform on [0, 1]
    Eigen::VectorXd phi_hat;  // even samples
    std::vector<double> bump_coeffs;
    std::vector<double> bump_dilations;

    double vanishing_order() const { return 2.0 * (K / 2) + 2.0; }
    double operator()(double x) const;      // Phi(x), Filon inversion
    double dilated(double r, double x) const { return (*this)(r * x); }
    double hat(double t) const;             // Phi-hat(t), linear interp
};
PhiFamily build_phi_family(int K, int n_grid = 8192);

/// Riesz tail split at dyadic index j:
///   G = H^alpha (1 - Phi_1) with H^alpha(lam) = lam^{-2 alpha},
///   Rhat_j = Ghat * mollifier(2^{-j} t)   (band-limited to [-2^{j-1}, 2^{j-1}]),
///   F_j = G - R_j,  J_j(lam) = (1 + 2^{2j} lam^2)^m lam^{2 alpha} F_j(lam).
/// The heavy Ghat table is shared between indices via `core`.
struct RieszTailCore;
struct RieszTailFamily {
    double alpha = 0.5;
    int j = 1;
    int m = 1;
    int K = 0;
    PhiFamily phi;
    Eigen::VectorXd lambda_grid; // [0, lambda_max]
    Eigen::VectorXd G, F_j, R_j, J_j;
    std::shared_ptr<const RieszTailCore> core;

    double sup_J() const { return J_j.cwiseAbs().maxCoeff(); }
};
RieszTailFamily build_riesz_tail_family(double alpha, int j, int m, int K,
                                        int n_lambda = 1024,
                                        double lambda_max = 8.0);

/// G evaluated pointwise (lam^{-2 alpha} (1 - Phi(lam))), for oracle tests.
double riesz_symbol(const PhiFamily& phi, double alpha, double lam);

/// sup_lambda |J_j| * 2^j over j in {1..6}; passes iff the sequence is
/// bounded and sup|J_j| decays geometrically (consecutive ratio <= 0.6).
CheckReport verify_pom_estimate(const RieszTailFamily& family);

} // namespace specbound

#endif
