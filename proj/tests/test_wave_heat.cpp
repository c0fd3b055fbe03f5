#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "specbound/wave_heat.hpp"

using namespace specbound;

namespace {
MatrixXc heat_matrix(const SpectralDecomposition& dec, double t) {
    return apply_function(dec, [t](double x) { return std::exp(-t * x); });
}
MatrixXc wave_matrix(const SpectralDecomposition& dec, double t) {
    return apply_function(
        dec, [t](double x) { return std::cos(t * std::sqrt(std::max(x, 0.0))); });
}
} // namespace

TEST_CASE("heat semigroup property") {
    auto [space, lap] = cycle_laplacian(24);
    auto dec = spectral_decompose(lap);
    MatrixXc a = heat_matrix(dec, 0.7), b = heat_matrix(dec, 1.3);
    MatrixXc c = heat_matrix(dec, 2.0);
    CHECK((a * b - c).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("cosine functional equation") {
    auto [space, lap] = cycle_laplacian(24);
    auto dec = spectral_decompose(lap);
    double t = 1.4, s = 0.6;
    MatrixXc lhs = 2.0 * wave_matrix(dec, t) * wave_matrix(dec, s);
    MatrixXc rhs = wave_matrix(dec, t + s) + wave_matrix(dec, t - s);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("wave and heat kernels agree with the spectral path") {
    auto [space, lap] = cycle_laplacian(16);
    auto dec = spectral_decompose(lap);
    auto wk = wave_kernel(dec, 2.0);
    auto hk = heat_kernel(dec, 0.5);
    CHECK((wk.blocks - wave_matrix(dec, 2.0)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((hk.blocks - heat_matrix(dec, 0.5)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("finite propagation speed on a path") {
    auto [space, lap] = path_laplacian(64);
    auto dec = spectral_decompose(lap);
    // Support radius grows at slope <= e sqrt(||L||)/2 plus a t-independent
    // offset from the 1e-10 cutoff (Bessel transition width).
    for (double t : {2.0, 4.0, 6.0}) {
        double r = eps_support_radius(wave_kernel(dec, t), 1e-10);
        CHECK(r <= std::exp(1.0) * std::sqrt(dec.spectral_radius()) / 2.0 * t +
                       6.0);
    }
    auto rep = propagation_speed_estimate(dec, {2.0, 4.0, 6.0, 8.0}, 1e-10);
    CHECK(rep.pass);
    CHECK(rep.observed_constant > 0.5);
    CHECK(rep.observed_constant <=
          std::exp(1.0) * std::sqrt(dec.spectral_radius()) / 2.0 * 1.1);
}

TEST_CASE("Davies-Gaffney ratio with the Bessel reference") {
    auto [space, lap] = cycle_laplacian(256);
    auto dec = spectral_decompose(lap);
    std::vector<PairProbe> probes;
    for (int rho : {2, 4, 8, 16, 32})
        for (double t : {0.5, 1.0, 2.0, 4.0}) probes.push_back({0, rho, t});
    auto rep = davies_gaffney_check(dec, probes);
    CHECK(rep.pass);
    CHECK(rep.observed_constant <= 2.0);

    // frozen oracle: e^{-4} I_8(4) e^{64/8} at rho = 8, t = 2
    auto single = davies_gaffney_check(dec, {{0, 8, 2.0}});
    CHECK(single.observed_constant ==
          doctest::Approx(0.53560389982854384).epsilon(1e-10));
}

TEST_CASE("subordination reconstructs the heat kernel") {
    auto [space, lap] = cycle_laplacian(32);
    auto dec = spectral_decompose(lap);
    auto rep = subordination_check(dec, 0.5, 64);
    CHECK(rep.pass);
    CHECK(rep.observed_constant < 1e-6);
    auto rep2 = subordination_check(dec, 0.5, 128);
    CHECK(rep2.observed_constant <= rep.observed_constant * 1.01);
    // At s = 4 sixteen nodes under-resolve the integrand, so node doubling
    // must buy several orders of magnitude.
    auto coarse = subordination_check(dec, 4.0, 16);
    auto fine = subordination_check(dec, 4.0, 32);
    CHECK(fine.observed_constant < coarse.observed_constant * 1e-2);
}

TEST_CASE("quadrature constant oracle") {
    // (1/Gamma(1)) int e^{-s} (1+1/s)^{1/4} ds, adaptive-quadrature value
    CHECK(ellip_quadrature_constant(4.0, 1.0) ==
          doctest::Approx(1.3853785596065804).epsilon(1e-6));
    // D = 0 collapses to the plain Gamma integral
    CHECK(ellip_quadrature_constant(4.0, 0.0) ==
          doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("resolvent/heat on-diagonal equivalence") {
    auto [space, lap] = cycle_laplacian(64);
    auto dec = spectral_decompose(lap);
    auto rep = ellip_equivalence_check(dec, {0.5, 1.0, 2.0, 4.0}, 4.0, 1.0);
    CHECK(rep.pass);
}

TEST_CASE("profiles interpolate") {
    auto [space, lap] = cycle_laplacian(16);
    auto dec = spectral_decompose(lap);
    auto prof = heat_profile(dec, {0.5, 1.0, 2.0});
    double v = prof.at(3, 0.75);
    CHECK(v <= prof.at(3, 0.5) + 1e-12);  // heat rows decay in t
    CHECK(v >= prof.at(3, 1.0) - 1e-12);
}

TEST_CASE("Gauss-Legendre exactness") {
    std::vector<double> x, w;
    gauss_legendre(5, 0.0, 1.0, x, w);
    double s = 0.0;
    for (int i = 0; i < 5; ++i) s += w[i] * std::pow(x[i], 9);
    CHECK(s == doctest::Approx(0.1).epsilon(1e-13));
    double total = 0.0;
    for (double wi : w) total += wi;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
}
