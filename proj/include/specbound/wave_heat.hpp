#ifndef SPECBOUND_WAVE_HEAT_HPP
#define SPECBOUND_WAVE_HEAT_HPP

#include <vector>

#include "specbound/bundle_op.hpp"

namespace specbound {

/// Per-point on-diagonal profile V_x(t) over a time grid, either resolvent
/// row norms ||K_{(I+t^2 L)^{-N/4}}(x,.)||_{L2} or heat row norms, with the
/// companion volume column mu(B(x,t))^{-1/2}.
struct OnDiagProfile {
    enum class Choice { Resolvent, Heat };
    Choice choice = Choice::Resolvent;
    int resolvent_power = 1; // N
    std::vector<double> t_grid;
    Eigen::MatrixXd values;        // n x |t_grid|
    Eigen::MatrixXd volume_column; // mu(B(x,t))^{-1/2}, same shape

    double at(int x, double t) const; // linear interpolation in t
};

OperatorKernel wave_kernel(const SpectralDecomposition& dec, double t);
OperatorKernel heat_kernel(const SpectralDecomposition& dec, double t);

/// Smallest r such that every block with rho(x,y) > r has operator norm
/// <= eps * max block norm.
double eps_support_radius(const OperatorKernel& kernel, double eps);

/// Least-squares slope of eps_support_radius(cos(t sqrt L)) against t.
/// Passes iff the incremental slopes over the upper half of the grid stay
/// within 10% of the fitted slope.
CheckReport propagation_speed_estimate(const SpectralDecomposition& dec,
                                       const std::vector<double>& t_grid,
                                       double eps);

struct PairProbe {
    int x, y;
    double t;
};

/// Davies-Gaffney ratio |<exp(-tL) d_x, d_y>| / exp(-rho^2/4t) over the
/// probe grid, with normalized point masses.  Probes outside the
/// propagation cone rho <= 2 sqrt(||L||) t are skipped (and counted in
/// details): past the cone the discrete kernel decays only like
/// e^{-rho log(rho/t)}, so the Gaussian comparison is vacuous there.
/// Passes iff the max ratio over the cone is at most `constant`
/// (default 2).
CheckReport davies_gaffney_check(const SpectralDecomposition& dec,
                                 const std::vector<PairProbe>& pairs,
                                 double constant = 2.0);

/// Reconstructs exp(-sL) from wave propagators by Gauss-Legendre
/// quadrature of exp(-sL) = int_0^inf cos(t sqrt L) (1/sqrt(pi s))
/// exp(-t^2/4s) dt.  Passes iff the max entrywise deviation from the
/// direct heat kernel is <= 1e-6.
CheckReport subordination_check(const SpectralDecomposition& dec, double s,
                                int nodes);

OnDiagProfile resolvent_profile(const SpectralDecomposition& dec,
                                const std::vector<double>& t_grid, int N,
                                BlockNorm norm = BlockNorm::Operator);

OnDiagProfile heat_profile(const SpectralDecomposition& dec,
                           const std::vector<double>& t_grid,
                           BlockNorm norm = BlockNorm::Operator);

/// Two-sided equivalence of on-diagonal resolvent and heat bounds for
/// m > D: (a) resolvent rows controlled by C_m times heat rows, with C_m
/// from the Gamma-weighted subordination integral; (b) heat rows
/// controlled by the sup of exp(-u)(1+u)^m times (I+tL)^{-m} rows.
CheckReport ellip_equivalence_check(const SpectralDecomposition& dec,
                                    const std::vector<double>& t_grid,
                                    double m, double D);

/// The constant (1/Gamma(m/4)) int_0^inf e^{-s} s^{m/4-1} (1+1/s)^{D/4} ds.
double ellip_quadrature_constant(double m, double D);

// Gauss-Legendre nodes/weights on [a, b].
void gauss_legendre(int n, double a, double b, std::vector<double>& nodes,
                    std::vector<double>& weights);

} // namespace specbound

#endif
