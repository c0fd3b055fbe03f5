// Benchmark: OpenMP kernels vs their serial reference implementations.
// Prints one line per kernel: sizes, serial and parallel wall time, speedup,
// and the max absolute discrepancy (should be at rounding level).

#include <chrono>
#include <cstdio>
#include <random>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "specbound/cz_riesz.hpp"

using namespace specbound;
using clk = std::chrono::steady_clock;

namespace {

template <class F> double time_ms(F&& fn, int reps) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        auto t0 = clk::now();
        fn();
        auto t1 = clk::now();
        best = std::min(best,
                        std::chrono::duration<double, std::milli>(t1 - t0)
                            .count());
    }
    return best;
}

} // namespace

int main() {
#ifdef _OPENMP
    std::printf("threads: %d\n", omp_get_max_threads());
#else
    std::printf("threads: 1 (compiled without OpenMP)\n");
#endif
    std::printf("%-24s %8s %12s %12s %8s %10s\n", "kernel", "n",
                "serial[ms]", "openmp[ms]", "speedup", "max|diff|");

    std::mt19937 rng(12345);
    std::normal_distribution<double> gauss(0.0, 1.0);

    for (int n : {256, 512, 1024}) {
        auto [space, lap] = cycle_laplacian(n);
        auto dec = spectral_decompose(lap);
        auto heat = kernel_of(
            apply_function(dec, [](double x) { return std::exp(-0.5 * x); }),
            space, 1);

        Eigen::VectorXd rn_s, rn_p;
        double ts = time_ms(
            [&] { rn_s = ref::row_l2_norms_all(heat, BlockNorm::HilbertSchmidt); },
            3);
        double tp = time_ms(
            [&] { rn_p = row_l2_norms_all(heat, BlockNorm::HilbertSchmidt); },
            3);
        std::printf("%-24s %8d %12.3f %12.3f %8.2fx %10.2e\n",
                    "row_l2_norms_all", n, ts, tp, ts / tp,
                    (rn_s - rn_p).cwiseAbs().maxCoeff());

        Eigen::VectorXd f(n);
        for (int i = 0; i < n; ++i) f(i) = gauss(rng);
        auto radii = default_radii_grid(*space);
        Eigen::VectorXd mf_s, mf_p;
        ts = time_ms([&] { mf_s = ref::maximal_function(space, f, radii); }, 3);
        tp = time_ms([&] { mf_p = maximal_function(space, f, radii); }, 3);
        std::printf("%-24s %8d %12.3f %12.3f %8.2fx %10.2e\n",
                    "maximal_function", n, ts, tp, ts / tp,
                    (mf_s - mf_p).cwiseAbs().maxCoeff());
    }
    return 0;
}
