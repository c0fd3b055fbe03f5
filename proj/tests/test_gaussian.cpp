#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "specbound/gaussian.hpp"

using namespace specbound;

TEST_CASE("truncation identity on a cycle") {
    auto [space, lap] = cycle_laplacian(64);
    auto dec = spectral_decompose(lap);
    auto rep = truncation_identity_check(dec, {{0, 8, 1.0}, {0, 12, 2.0}});
    CHECK(rep.pass);
}

TEST_CASE("truncation identity requires t < rho^2") {
    auto [space, lap] = cycle_laplacian(32);
    auto dec = spectral_decompose(lap);
    CHECK_THROWS(truncation_identity_check(dec, {{0, 2, 5.0}}));
}

TEST_CASE("on-diagonal Gaussian constant is finite on both variants") {
    auto [space, lap] = cycle_laplacian(64);
    auto dec = spectral_decompose(lap);
    std::vector<double> t_grid = {0.25, 0.5, 1.0, 2.0, 4.0};
    auto prof = heat_profile(dec, t_grid);
    std::vector<HeatTriple> triples;
    for (int rho : {4, 8, 12}) triples.push_back({0, rho, 1.0});
    auto r1 = gl2_bound_check(dec, prof, triples, 2, Gl2Variant::ZW1);
    auto r2 = gl2_bound_check(dec, prof, triples, 2, Gl2Variant::ZW2);
    CHECK(r1.pass);
    CHECK(r2.pass);
    CHECK(std::isfinite(r1.observed_constant));
    CHECK(std::isfinite(r2.observed_constant));
    CHECK(r1.observed_constant > 0.0);
}

TEST_CASE("Molchanov slope on the antipodal sphere kernel") {
    auto rep = molchanov_sphere_check(40, {0.15, 0.2, 0.25, 0.3});
    CHECK(rep.pass);
    CHECK(rep.observed_constant ==
          doctest::Approx(-M_PI * M_PI / 4.0).epsilon(0.05));
}

TEST_CASE("Molchanov guards") {
    CHECK_THROWS(molchanov_sphere_check(10, {0.15, 0.2}));  // l_max too small
    CHECK_THROWS(molchanov_sphere_check(40, {0.01, 0.02})); // cancellation
}
