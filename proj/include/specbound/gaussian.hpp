#ifndef SPECBOUND_GAUSSIAN_HPP
#define SPECBOUND_GAUSSIAN_HPP

#include "specbound/multiplier.hpp"
#include "specbound/wave_heat.hpp"

namespace specbound {

struct HeatTriple {
    int x, y;
    double t;
};

/// Heat-kernel truncation identity at s = rho(x,y)/sqrt(t): certifies the
/// split exp(-tL) = Fhat_s(sqrt(tL)) + Rhat_s(sqrt(tL)) with both
/// transforms computed by quadrature from the x-side (the residual is pure
/// quadrature error, certified at 1e-8), and separately compares the
/// wave-carried part K_{exp(-tL)} - K_{Fhat_s} at (x,y) against the
/// finite-propagation tail bound: R_s is supported in physical times
/// u sqrt(t) < rho, where the propagator kernel at (x,y) is small.
/// Requires the regime t < rho^2 (s > 1).
CheckReport truncation_identity_check(const SpectralDecomposition& dec,
                                      const std::vector<HeatTriple>& triples);

enum class Gl2Variant { ZW1, ZW2 };

/// Observed C_N = max over triples of
///   |K_heat(x,y)| * rho t^{-1/2} * e^{rho^2/4t} / (V_x(t/rho) V_y(t/rho))
/// with V from the on-diagonal profile (ZW1: profile values, ZW2: volume
/// column).  A finite model always yields some constant; stability across
/// model sizes is asserted by callers comparing two reports.
CheckReport gl2_bound_check(const SpectralDecomposition& dec,
                            const OnDiagProfile& profile,
                            const std::vector<HeatTriple>& triples, int N,
                            Gl2Variant variant);

/// Antipodal heat kernel on S^2 via the Legendre spectral series with
/// compensated summation; fits the slope of ln[K(t) t / (1 + pi/sqrt(t))]
/// against 1/t and compares with -pi^2/4 (within 5%).
CheckReport molchanov_sphere_check(int l_max,
                                   const std::vector<double>& t_grid);

} // namespace specbound

#endif
