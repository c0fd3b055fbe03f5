#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "specbound/models.hpp"

using namespace specbound;

namespace {
std::pair<SpacePtr, std::vector<Edge>> cycle_with_edges(int n) {
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n, 1.0});
    auto space = std::make_shared<const MetricMeasureSpace>(make_cycle(n));
    return {space, edges};
}
} // namespace

TEST_CASE("magnetic operator with zero data is the graph Laplacian") {
    auto [space, edges] = cycle_with_edges(8);
    std::vector<double> phases(8, 0.0);
    auto ms = build_magnetic(space, edges, phases, Eigen::VectorXd::Zero(8));
    auto lap = graph_laplacian(space, edges);
    CHECK((ms.op.matrix - lap.matrix).cwiseAbs().maxCoeff() < 1e-14);
    auto dec = spectral_decompose(ms.op);
    std::vector<double> expected;
    for (int k = 0; k < 8; ++k)
        expected.push_back(2.0 - 2.0 * std::cos(2.0 * M_PI * k / 8));
    std::sort(expected.begin(), expected.end());
    for (int i = 0; i < 8; ++i)
        CHECK(dec.eigenvalues(i) == doctest::Approx(expected[i]).epsilon(1e-12));
}

TEST_CASE("flux pi flips the cycle spectrum") {
    // total flux Theta shifts eigenvalues to 2 - 2 cos((2 pi k + Theta)/n)
    auto [space, edges] = cycle_with_edges(8);
    std::vector<double> phases(8, 0.0);
    phases[0] = M_PI;
    auto ms = build_magnetic(space, edges, phases, Eigen::VectorXd::Zero(8));
    CHECK(ms.op.self_adjointness_residual() < 1e-13);
    auto dec = spectral_decompose(ms.op);
    std::vector<double> expected;
    for (int k = 0; k < 8; ++k)
        expected.push_back(2.0 -
                           2.0 * std::cos((2.0 * M_PI * k + M_PI) / 8));
    std::sort(expected.begin(), expected.end());
    for (int i = 0; i < 8; ++i)
        CHECK(dec.eigenvalues(i) == doctest::Approx(expected[i]).epsilon(1e-12));
}

TEST_CASE("constant potential shifts the spectrum by V^2") {
    auto [space, edges] = cycle_with_edges(8);
    std::vector<double> phases(8, 0.0);
    Eigen::VectorXd V = Eigen::VectorXd::Constant(8, 0.7);
    auto ms = build_magnetic(space, edges, phases, V);
    auto dec0 = spectral_decompose(
        build_magnetic(space, edges, phases, Eigen::VectorXd::Zero(8)).op);
    auto dec = spectral_decompose(ms.op);
    for (int i = 0; i < 8; ++i)
        CHECK(dec.eigenvalues(i) ==
              doctest::Approx(dec0.eigenvalues(i) + 0.49).epsilon(1e-12));
}

TEST_CASE("build_magnetic rejects negative potential") {
    auto [space, edges] = cycle_with_edges(8);
    Eigen::VectorXd V = Eigen::VectorXd::Zero(8);
    V(3) = -1.0;
    CHECK_THROWS_WITH_AS(
        build_magnetic(space, edges, std::vector<double>(8, 0.0), V),
        doctest::Contains("V^2"), std::invalid_argument);
}

TEST_CASE("heat kernel domination by the free operator") {
    auto [space, edges] = cycle_with_edges(16);
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-M_PI, M_PI);
    std::vector<double> phases(16);
    for (auto& p : phases) p = u(rng);
    Eigen::VectorXd V(16);
    for (int i = 0; i < 16; ++i) V(i) = 0.5 * std::abs(u(rng));
    auto ms = build_magnetic(space, edges, phases, V);
    auto rep = domination_check(ms, {0.1, 1.0, 10.0});
    CHECK(rep.pass);
    CHECK(rep.observed_constant <= 1e-12);
}

TEST_CASE("energy decay within the cosh bound") {
    auto [space, edges] = cycle_with_edges(32);
    auto ms = build_magnetic(space, edges, std::vector<double>(32, 0.0),
                             Eigen::VectorXd::Zero(32));
    double kappa = 0.5;
    Eigen::VectorXd xi(32);
    for (int i = 0; i < 32; ++i) xi(i) = kappa * space->rho(0, i);
    auto rep = energy_decay_check(ms, xi, kappa, {0.5, 1.0, 2.0, 4.0}, 0, 2.0);
    CHECK(rep.pass);
    double disc = 2.0 * (std::cosh(kappa) - 1.0);
    CHECK(rep.observed_constant <= disc + 1e-9);
}

TEST_CASE("energy decay rejects non-Lipschitz weights") {
    auto [space, edges] = cycle_with_edges(16);
    auto ms = build_magnetic(space, edges, std::vector<double>(16, 0.0),
                             Eigen::VectorXd::Zero(16));
    Eigen::VectorXd xi = Eigen::VectorXd::Zero(16);
    xi(5) = 10.0; // jump of 10 over an edge of length 1 vs kappa = 0.5
    CHECK_THROWS(energy_decay_check(ms, xi, 0.5, {1.0}, 0, 2.0));
}

TEST_CASE("Hodge complex of the filled triangle") {
    auto hc = build_hodge(3, {{0, 1}, {1, 2}, {0, 2}}, {{{0, 1, 2}}});
    CHECK(hc.d0.rows() == 3);
    CHECK(hc.d1.rows() == 1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hc.L0);
    CHECK(es.eigenvalues()(0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(es.eigenvalues()(1) == doctest::Approx(3.0));
    CHECK(es.eigenvalues()(2) == doctest::Approx(3.0));
    CHECK((hc.d0 * hc.L0 - hc.L1 * hc.d0).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((hc.d1 * hc.d0).cwiseAbs().maxCoeff() < 1e-13); // d^2 = 0
    auto rep = commutation_check(hc);
    CHECK(rep.pass);
}

TEST_CASE("commutation on a random 2-complex") {
    // triangulated 4x4 grid patch: systematic triangles
    int rows = 4, cols = 4;
    auto vid = [&](int r, int c) { return r * cols + c; };
    std::vector<std::pair<int, int>> edges;
    std::vector<std::array<int, 3>> tris;
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            if (c + 1 < cols) edges.push_back({vid(r, c), vid(r, c + 1)});
            if (r + 1 < rows) edges.push_back({vid(r, c), vid(r + 1, c)});
            if (r + 1 < rows && c + 1 < cols) {
                edges.push_back({vid(r, c), vid(r + 1, c + 1)});
                tris.push_back({vid(r, c), vid(r, c + 1), vid(r + 1, c + 1)});
                tris.push_back({vid(r, c), vid(r + 1, c), vid(r + 1, c + 1)});
            }
        }
    auto hc = build_hodge(rows * cols, edges, tris);
    CHECK((hc.d1 * hc.d0).cwiseAbs().maxCoeff() < 1e-13);
    CHECK((hc.d0 * hc.L0 - hc.L1 * hc.d0).cwiseAbs().maxCoeff() < 1e-12);
    auto rep = commutation_check(hc);
    CHECK(rep.pass);
}

TEST_CASE("sphere model spot values") {
    auto K = sphere_spectral_model(2000);
    CHECK(K(0.25) == doctest::Approx(1.9517923307024102e-4).epsilon(5e-3));
    CHECK(K(0.2) == doctest::Approx(2.2845005301029827e-5).epsilon(5e-3));
    CHECK(K(0.3) == doctest::Approx(7.7889014237482167e-4).epsilon(5e-3));
    CHECK_THROWS(K(0.05)); // cancellation regime
    auto K40 = sphere_spectral_model(40);
    CHECK(K40.tail_bound(0.2) < 1e-10);
    CHECK(K40(0.2) == doctest::Approx(2.2845005301029827e-5).epsilon(5e-3));
}
