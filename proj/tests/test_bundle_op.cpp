#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <random>

#include "specbound/bundle_op.hpp"

using namespace specbound;

TEST_CASE("cycle Laplacian spectrum matches the closed form") {
    const int n = 8;
    auto [space, lap] = cycle_laplacian(n);
    CHECK(lap.self_adjointness_residual() < 1e-13);
    auto dec = spectral_decompose(lap);
    CHECK(dec.null_dim == 1);

    std::vector<double> expected;
    for (int k = 0; k < n; ++k)
        expected.push_back(2.0 - 2.0 * std::cos(2.0 * M_PI * k / n));
    std::sort(expected.begin(), expected.end());
    for (int i = 0; i < n; ++i)
        CHECK(dec.eigenvalues(i) == doctest::Approx(expected[i]).epsilon(1e-12));
}

TEST_CASE("self-adjointness with nonuniform masses") {
    const int n = 16;
    std::vector<Edge> edges;
    for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, 1.0});
    Eigen::VectorXd mu(n);
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(0.5, 2.0);
    for (int i = 0; i < n; ++i) mu(i) = u(rng);
    auto space = std::make_shared<const MetricMeasureSpace>(
        build_space(n, edges, mu));
    auto lap = graph_laplacian(space, edges);
    CHECK(lap.self_adjointness_residual() < 1e-12);
    auto dec = spectral_decompose(lap);
    CHECK(dec.eigenvalues.minCoeff() > -1e-12);
    // mu-orthonormality of the basis
    Eigen::VectorXd w = mu;
    MatrixXc gram = dec.basis.adjoint() * w.asDiagonal() * dec.basis;
    CHECK((gram - MatrixXc::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("apply_function of the constant 1 is the identity") {
    auto [space, lap] = cycle_laplacian(12);
    auto dec = spectral_decompose(lap);
    MatrixXc one = apply_function(dec, [](double) { return 1.0; });
    CHECK((one - MatrixXc::Identity(12, 12)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("heat kernel entries match the Bessel series") {
    // On C_n, exp(-tL)(0,d) = e^{-2t} I_d(2t) up to wrap terms that are
    // below 1e-60 for n = 64, t = 1.
    auto [space, lap] = cycle_laplacian(64);
    auto dec = spectral_decompose(lap);
    MatrixXc heat =
        apply_function(dec, [](double x) { return std::exp(-x); });
    CHECK(std::abs(heat(0, 0)) ==
          doctest::Approx(0.30850832255367104).epsilon(1e-12));
    CHECK(std::abs(heat(0, 1)) ==
          doctest::Approx(0.21526928924893766).epsilon(1e-12));
    CHECK(std::abs(heat(0, 4)) ==
          doctest::Approx(0.0068653653863206851).epsilon(1e-12));
}

TEST_CASE("apply_function rejects NaN at an eigenvalue") {
    auto [space, lap] = cycle_laplacian(8);
    auto dec = spectral_decompose(lap);
    CHECK_THROWS(apply_function(
        dec, [](double x) { return 1.0 / x * 0.0 + std::nan(""); }));
}

TEST_CASE("kernel, row norms, and the serial reference agree") {
    auto [space, lap] = cycle_laplacian(32);
    auto dec = spectral_decompose(lap);
    auto heat = kernel_of(
        apply_function(dec, [](double x) { return std::exp(-x); }), space, 1);
    Eigen::VectorXd par = row_l2_norms_all(heat, BlockNorm::HilbertSchmidt);
    Eigen::VectorXd ser =
        ref::row_l2_norms_all(heat, BlockNorm::HilbertSchmidt);
    CHECK((par - ser).cwiseAbs().maxCoeff() == 0.0);
    CHECK(par(0) ==
          doctest::Approx(row_l2_norm(heat, 0, BlockNorm::HilbertSchmidt)));
    // Parseval: row L2 norm of exp(-tL) equals the spectral sum.
    // ||K(0,.)||_{L2}^2 = sum_k |u_k(0)|^2 e^{-2t lambda_k} for mu = 1.
    double spectral = 0.0;
    for (int k = 0; k < 32; ++k)
        spectral += std::norm(dec.basis(0, k)) *
                    std::exp(-2.0 * dec.eigenvalues(k));
    CHECK(par(0) == doctest::Approx(std::sqrt(spectral)).epsilon(1e-10));
}

TEST_CASE("composition bound") {
    auto [space, lap] = cycle_laplacian(24);
    auto dec = spectral_decompose(lap);
    auto rep = compose_bound_check(
        [](double x) { return 1.0 / (1.0 + x); },
        [](double x) { return std::exp(-0.3 * x); }, dec);
    CHECK(rep.pass);
}

TEST_CASE("Chebyshev apply: accuracy and locality") {
    auto [space, lap] = cycle_laplacian(16);
    auto dec = spectral_decompose(lap);
    auto F = [](double x) { return std::exp(-x); };
    MatrixXc exact = apply_function(dec, F);
    MatrixXc cheb = chebyshev_apply(lap, F, 30, 0.0, dec.spectral_radius());
    CHECK((exact - cheb).cwiseAbs().maxCoeff() < 1e-10);

    // degree-3 polynomial of a 1-hop operator reaches at most 3 hops
    MatrixXc low = chebyshev_apply(lap, F, 3, 0.0, dec.spectral_radius());
    double far = 0.0;
    for (int x = 0; x < 16; ++x)
        for (int y = 0; y < 16; ++y)
            if (space->rho(x, y) > 3.0 + 1e-9)
                far = std::max(far, std::abs(low(x, y)));
    CHECK(far < 1e-13);
}

TEST_CASE("operator save/load round trip") {
    const int n = 10;
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n, 1.0});
    auto space = std::make_shared<const MetricMeasureSpace>(
        build_space(n, edges, Eigen::VectorXd::Ones(n)));
    auto lap = graph_laplacian(space, edges);
    std::string path = "op_rt.txt";
    save_operator(lap, edges, path);
    auto lap2 = load_operator(path);
    CHECK(lap2.l == lap.l);
    CHECK(lap2.matrix == lap.matrix); // bit-exact
    CHECK(lap2.space->mu == space->mu);
    std::remove(path.c_str());
}

TEST_CASE("kernel CSV export") {
    auto [space, lap] = cycle_laplacian(4);
    auto dec = spectral_decompose(lap);
    auto k = kernel_of(apply_function(dec, [](double x) { return std::exp(-x); }),
                       space, 1);
    std::string csv = kernel_to_csv(k);
    CHECK(csv.find("x,y") == 0);
    int lines = 0;
    for (char c : csv)
        if (c == '\n') ++lines;
    CHECK(lines == 1 + 4 * 4);
}
