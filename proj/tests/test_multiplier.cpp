#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "specbound/multiplier.hpp"

using namespace specbound;

TEST_CASE("Filon quadrature is exact for parabolas at high frequency") {
    // int_0^2 x^2 cos(t x) dx, analytic antiderivative
    auto exact = [](double t) {
        double a = 2.0;
        return (a * a / t - 2.0 / (t * t * t)) * std::sin(t * a) +
               2.0 * a * std::cos(t * a) / (t * t);
    };
    int n = 64;
    Eigen::VectorXd f(n + 1);
    double h = 2.0 / n;
    for (int i = 0; i <= n; ++i) f(i) = (i * h) * (i * h);
    for (double t : {0.3, 37.5, 412.0})
        CHECK(filon_cos(f, 0.0, h, t) == doctest::Approx(exact(t)).epsilon(1e-12));
}

TEST_CASE("power cosine tail oracle") {
    // int_10^inf lam^{-2} cos(3 lam) d lam; closed form
    // cos(tL)/L - t (pi/2 - Si(tL)), high-precision oracle
    // asymptotic truncation floor at this small t*L is ~1e-9 relative;
    // the table uses it only for t*L > 2.6e5 where it is machine-exact
    CHECK(power_cosine_tail(3.0, 10.0, 2.0) ==
          doctest::Approx(0.0033057846951218803).epsilon(1e-8));
    CHECK(power_cosine_tail(0.25, 1048576.0, 1.0) ==
          doctest::Approx(power_cosine_tail(0.25, 1048576.0, 1.0, 12))
              .epsilon(1e-14));
}

TEST_CASE("Gaussian transform pair") {
    // f = (4 pi)^{-1/2} e^{-x^2/4}  =>  fhat(t) = e^{-t^2}
    int n = 4096;
    double T = 40.0;
    SampledEvenFunction f{T, Eigen::VectorXd(n + 1), -1.0};
    for (int i = 0; i <= n; ++i) {
        double x = T * i / n;
        f.values(i) = std::exp(-x * x / 4.0) / std::sqrt(4.0 * M_PI);
    }
    auto fh = transform_even(f, 6.0, 600);
    for (int i = 0; i <= 600; ++i) {
        double t = 6.0 * i / 600;
        CHECK(fh.values(i) == doctest::Approx(std::exp(-t * t)).epsilon(1e-9));
    }
}

TEST_CASE("double transform returns 2 pi times the function") {
    int n = 4096;
    double T = 40.0;
    SampledEvenFunction f{T, Eigen::VectorXd(n + 1), -1.0};
    for (int i = 0; i <= n; ++i) {
        double x = T * i / n;
        f.values(i) = std::exp(-x * x / 4.0);
    }
    auto fh = transform_even(f, 20.0, 2000);
    auto back = transform_even(fh, 10.0, 1000);
    for (int i = 0; i <= 1000; ++i) {
        double x = 10.0 * i / 1000;
        CHECK(back.values(i) ==
              doctest::Approx(2.0 * M_PI * std::exp(-x * x / 4.0))
                  .epsilon(1e-7).scale(1.0));
    }
}

TEST_CASE("transform_even rejects too-small windows") {
    int n = 256;
    SampledEvenFunction f{2.0, Eigen::VectorXd(n + 1), -1.0};
    for (int i = 0; i <= n; ++i) {
        double x = 2.0 * i / n;
        f.values(i) = std::exp(-x * x / 4.0); // still ~0.37 at the boundary
    }
    CHECK_THROWS_WITH_AS(transform_even(f, 2.0, 100),
                         doctest::Contains("window too small"),
                         std::runtime_error);
}

TEST_CASE("smooth step and mollifier hit their flats exactly") {
    CHECK(smooth_step(-1.0) == 0.0);
    CHECK(smooth_step(-1.5) == 0.0);
    CHECK(smooth_step(-0.5) == 1.0);
    CHECK(smooth_step(3.0) == 1.0);
    CHECK(smooth_step(-0.75) > 0.0);
    CHECK(smooth_step(-0.75) < 1.0);
    CHECK(smooth_step(-0.7) > smooth_step(-0.8));

    CHECK(mollifier(0.0) == 1.0);
    CHECK(mollifier(0.25) == 1.0);
    CHECK(mollifier(-0.25) == 1.0);
    CHECK(mollifier(0.5) == 0.0);
    CHECK(mollifier(0.7) == 0.0);
    CHECK(mollifier(0.375) > 0.0);
    CHECK(mollifier(0.375) < 1.0);
}

TEST_CASE("Gaussian truncation family") {
    auto fam = build_gl2_family(4.0);
    int n = fam.x_grid.size();
    double cut = fam.s - 1.0 / (2.0 * fam.s);
    for (int i = 0; i < n; ++i) {
        double x = fam.x_grid(i);
        CHECK(fam.F_s(i) + fam.R_s(i) ==
              doctest::Approx(fam.gaussian(x)).epsilon(1e-14));
        if (x > cut + 1e-9) CHECK(fam.R_s(i) == 0.0); // compact support
        if (x < fam.s) CHECK(fam.phi_s(i) <= 1.0);
    }
    // Fhat_s + Rhat_s = e^{-lambda^2}: check via the sampled Fhat at 0
    // (Rhat_s(0) = integral of R_s = 1 - integral of F_s).
    double h = fam.x_grid(1) - fam.x_grid(0);
    double int_R = 0.0;
    for (int i = 0; i < n; ++i)
        int_R += fam.R_s(i) * h * (i == 0 || i == n - 1 ? 0.5 : 1.0);
    CHECK(fam.F_hat(0) + 2.0 * int_R == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("osz decay constant is stable in s") {
    auto fam = build_gl2_family(4.0);
    auto rep = verify_osz_decay(fam, 2);
    CHECK(rep.pass);
    CHECK(rep.observed_constant > 0.0);
    CHECK(std::isfinite(rep.observed_constant));
}

TEST_CASE("Fejer pair at K = 0") {
    auto phi = build_phi_family(0);
    CHECK(phi.hat(0.0) == doctest::Approx(2.0 * M_PI));
    CHECK(phi.hat(0.5) == doctest::Approx(M_PI));
    CHECK(phi(0.0) == doctest::Approx(1.0).epsilon(1e-9));
    // Phi(x) = sinc^2(x/2) = 2(1 - cos x)/x^2
    for (double x : {1.0, 2.5, 5.0})
        CHECK(phi(x) ==
              doctest::Approx(2.0 * (1.0 - std::cos(x)) / (x * x))
                  .epsilon(1e-8));
    CHECK(std::abs(phi(2.0 * M_PI)) < 1e-8); // sinc^2 zero
}

TEST_CASE("moment system family: normalization and vanishing moments") {
    auto phi = build_phi_family(2);
    CHECK(phi.vanishing_order() == 4.0);
    CHECK(phi(0.0) == doctest::Approx(1.0).epsilon(1e-8));
    // second derivative at 0 vanishes (int t^2 phi_hat = 0)
    double h = 1e-2;
    double d2 = (phi(h) - 2.0 * phi(0.0) + phi(-h)) / (h * h);
    CHECK(std::abs(d2) < 1e-5);
    // hat supported in [-1, 1]
    CHECK(phi.hat(1.0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(phi.hat(1.5) == 0.0);
    // dilation
    CHECK(phi.dilated(2.0, 0.7) == doctest::Approx(phi(1.4)));
}

TEST_CASE("Riesz symbol asymptote at lambda = 50") {
    // At large lambda, G = lam^{-2 alpha}(1 - Phi) ~ lam^{-1} for alpha = 1/2.
    auto phi = build_phi_family(1);
    double g = riesz_symbol(phi, 0.5, 50.0);
    CHECK(std::abs(g - 1.0 / 50.0) < 1e-6);
}

TEST_CASE("band-limited application against the spectral path") {
    auto [space, lap] = cycle_laplacian(32);
    auto dec = spectral_decompose(lap);
    auto phi = build_phi_family(0);
    // fhat = triangle 2 pi (1 - |t|) on [0, 1]
    int n = 512;
    SampledEvenFunction fhat{1.0, Eigen::VectorXd(n + 1), 1.0};
    for (int i = 0; i <= n; ++i)
        fhat.values(i) = 2.0 * M_PI * (1.0 - double(i) / n);
    auto res = apply_band_limited(dec, fhat, 128);
    MatrixXc direct = apply_function(dec, [&](double lam) {
        return phi(std::sqrt(std::max(lam, 0.0)));
    });
    CHECK((res.matrix - direct).cwiseAbs().maxCoeff() < 1e-8);
    // Discrete wave propagators have exponentially small tails past the
    // cone, so the 1e-10 support radius overshoots the band limit by a few
    // hops but stays far below the diameter.
    CHECK(res.support_radius <= 6.0);
    CHECK_THROWS(apply_band_limited(dec, fhat, 2)); // Nyquist guard
}

TEST_CASE("dyadic Riesz remainders decay geometrically") {
    auto fam = build_riesz_tail_family(0.5, 1, 1, 3);
    auto rep = verify_pom_estimate(fam);
    CHECK(rep.pass);
    CHECK(rep.observed_constant <= 0.6);
    CHECK(std::isfinite(rep.details["pom_constant"].get<double>()));
}

TEST_CASE("riesz tail guard rejects insufficient vanishing order") {
    // alpha = 2 needs vanishing order > 4; K = 0 gives only 2
    CHECK_THROWS(build_riesz_tail_family(2.0, 1, 1, 0));
}
