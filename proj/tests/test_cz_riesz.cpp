#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "specbound/cz_riesz.hpp"

using namespace specbound;

namespace {
SpacePtr cycle_space(int n) {
    return std::make_shared<const MetricMeasureSpace>(make_cycle(n));
}
Eigen::VectorXd random_f(int n, unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    Eigen::VectorXd f(n);
    for (int i = 0; i < n; ++i) f(i) = g(rng);
    // a few spikes so Omega is nontrivial
    f(n / 3) += 6.0;
    f(2 * n / 3) -= 5.0;
    return f;
}
} // namespace

TEST_CASE("maximal function: parallel equals serial; dominates |f|") {
    auto space = cycle_space(64);
    auto f = random_f(64, 11);
    auto radii = default_radii_grid(*space);
    radii.insert(radii.begin(), 0.0);
    Eigen::VectorXd mp = maximal_function(space, f, radii);
    Eigen::VectorXd ms = ref::maximal_function(space, f, radii);
    CHECK((mp - ms).cwiseAbs().maxCoeff() == 0.0);
    for (int i = 0; i < 64; ++i) {
        CHECK(mp(i) >= std::abs(f(i)) - 1e-14);
        CHECK(mp(i) <= f.cwiseAbs().maxCoeff() + 1e-14);
    }
}

TEST_CASE("CZ decomposition invariants") {
    auto space = cycle_space(64);
    auto f = random_f(64, 23);
    double mean_abs = f.cwiseAbs().dot(space->mu) / space->total_measure();
    double lambda = 2.0 * mean_abs;
    auto cz = cz_decompose(space, f, lambda);

    // exact reconstruction f = g + sum b_i
    Eigen::VectorXd recon = cz.g;
    for (const auto& ball : cz.balls) recon += ball.b;
    CHECK((recon - f).cwiseAbs().maxCoeff() == 0.0);

    // g = f off Omega and bad parts supported in their (doubled) balls
    for (const auto& ball : cz.balls) {
        for (int y = 0; y < 64; ++y)
            if (ball.b(y) != 0.0)
                CHECK(space->rho(ball.center, y) <= ball.radius + 1e-9);
    }

    CHECK(cz.good_sup_constant * lambda >= cz.g.cwiseAbs().maxCoeff() - 1e-12);
    CHECK(cz.overlap_sigma >= 1);
    CHECK(cz.overlap_sigma <= 16);
    CHECK(cz.ball_mass_constant < 64.0);
    CHECK(cz.total_measure_constant < 64.0);

    // Vitali disjointness at the selection radii
    for (size_t a = 0; a < cz.balls.size(); ++a)
        for (size_t b = a + 1; b < cz.balls.size(); ++b) {
            double ra = cz.balls[a].radius / 2.0, rb = cz.balls[b].radius / 2.0;
            CHECK(space->rho(cz.balls[a].center, cz.balls[b].center) >
                  ra + rb - 1e-9);
        }
}

TEST_CASE("CZ rejects levels below the global average") {
    auto space = cycle_space(32);
    Eigen::VectorXd f = Eigen::VectorXd::Ones(32);
    CHECK_THROWS_WITH_AS(cz_decompose(space, f, 0.5),
                         doctest::Contains("level"), std::runtime_error);
}

TEST_CASE("CZ with empty Omega returns pure good part") {
    auto space = cycle_space(32);
    Eigen::VectorXd f = Eigen::VectorXd::Ones(32);
    auto cz = cz_decompose(space, f, 2.0);
    CHECK(cz.balls.empty());
    CHECK((cz.g - f).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("graph gradient squares to the Laplacian") {
    auto space = cycle_space(24);
    std::vector<Edge> edges;
    for (int i = 0; i < 24; ++i) edges.push_back({i, (i + 1) % 24, 1.0});
    auto grad = graph_gradient(space, edges);
    auto lap = graph_laplacian(space, edges);
    // energy identity: ||d0 f||^2_target = <L f, f>_mu for random f
    auto f = random_f(24, 5);
    Eigen::VectorXcd df = grad.matrix * f;
    double lhs = (df.cwiseAbs2().cwiseProduct(
                      grad.target_measure.cast<double>()))
                     .sum();
    Eigen::VectorXcd lf = lap.matrix * f;
    double rhs = (lf.cwiseProduct(f.cast<Complex>().conjugate()))
                     .real()
                     .cwiseProduct(space->mu)
                     .sum();
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
}

TEST_CASE("Riesz transform has unit L2 norm on cycles") {
    for (int n : {32, 64}) {
        auto space = cycle_space(n);
        std::vector<Edge> edges;
        for (int i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n, 1.0});
        auto grad = graph_gradient(space, edges);
        auto dec = spectral_decompose(graph_laplacian(space, edges));
        CHECK(riesz_l2_norm(grad, dec, 0.5) ==
              doctest::Approx(1.0).epsilon(1e-8));
    }
}

TEST_CASE("weak (1,1) scan on the identity is exactly 1") {
    auto space = cycle_space(16);
    MatrixXc T = MatrixXc::Identity(16, 16);
    Eigen::VectorXd tm = space->mu;
    double w = weak11_estimate(T, space, tm, {0, 5, 11});
    CHECK(w == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("Lp norm estimate matches sigma_max at p = 2 and is monotone") {
    auto space = cycle_space(16);
    std::vector<Edge> edges;
    for (int i = 0; i < 16; ++i) edges.push_back({i, (i + 1) % 16, 1.0});
    auto lap = graph_laplacian(space, edges);
    MatrixXc T = lap.matrix;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(T);
    double smax = svd.singularValues()(0);
    double e300 = lp_norm_estimate(T, space, space->mu, 2.0, 42, 300);
    CHECK(e300 == doctest::Approx(smax).epsilon(1e-6));
    double e10 = lp_norm_estimate(T, space, space->mu, 2.0, 42, 10);
    CHECK(e10 <= e300 + 1e-12);
    // p = 1.5 lower bound can't exceed interpolation of 1 and 2 norms wildly
    double e15 = lp_norm_estimate(T, space, space->mu, 1.5, 42, 30);
    CHECK(e15 > 0.0);
    CHECK_THROWS(lp_norm_estimate(T, space, space->mu, 2.5, 1, 20));
    CHECK_THROWS(lp_norm_estimate(T, space, space->mu, 1.5, 1, 3));
}

TEST_CASE("good function diagnostic") {
    auto space = cycle_space(64);
    std::vector<Edge> edges;
    for (int i = 0; i < 64; ++i) edges.push_back({i, (i + 1) % 64, 1.0});
    auto dec = spectral_decompose(graph_laplacian(space, edges));
    auto f = random_f(64, 31);
    double mean_abs = f.cwiseAbs().dot(space->mu) / space->total_measure();
    auto phi = build_phi_family(0);
    auto rep = good_function_diagnostic(dec, f, 2.0 * mean_abs, phi);
    CHECK(rep.pass);
    CHECK(rep.details.contains("good_sup_constant"));
    CHECK(rep.details.contains("overlap_sigma"));
}

TEST_CASE("Riesz tail annulus decay") {
    const int n = 64;
    auto space = cycle_space(n);
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n, 1.0});
    auto grad = graph_gradient(space, edges);
    auto dec = spectral_decompose(graph_laplacian(space, edges));
    auto phi = build_phi_family(0);
    auto rep = riesz_tail_bound_check(grad, dec, phi, 0.5, 1.0, 5);
    CHECK(rep.pass);
    CHECK(std::isfinite(rep.observed_constant));
}
