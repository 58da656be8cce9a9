// Times the evaluation kernels against the serial Clenshaw reference:
// scattered-point batches (serial vs OpenMP) and dense Chebyshev grids
// (per-point Clenshaw vs DCT). Verifies agreement while timing.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <vector>

#include "entroq/chebyshev.hpp"

using namespace entroq::cheb;
using clock_t_ = std::chrono::steady_clock;

static double ms_since(clock_t_::time_point t0) {
    return std::chrono::duration<double, std::milli>(clock_t_::now() - t0).count();
}

int main() {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);

    for (int deg : {256, 2048, 16384, 131072}) {
        std::vector<double> c(deg + 1);
        for (auto& v : c) v = uni(gen) / (1.0 + deg);

        const int pts = 1 << 16;
        std::vector<double> t(pts), out_ref(pts), out_omp(pts);
        for (auto& v : t) v = uni(gen);

        auto t0 = clock_t_::now();
        eval_batch_serial(c, t, out_ref);
        double serial_ms = ms_since(t0);

        t0 = clock_t_::now();
        eval_batch(c, t, out_omp);
        double omp_ms = ms_since(t0);

        double dev = 0.0;
        for (int i = 0; i < pts; ++i) dev = std::max(dev, std::abs(out_ref[i] - out_omp[i]));

        int N = next_nice(4 * (deg + 1));
        t0 = clock_t_::now();
        auto grid_ref = grid_values_lobatto_serial(c, N);
        double grid_serial_ms = ms_since(t0);

        t0 = clock_t_::now();
        auto grid_fft = grid_values_lobatto(c, N);
        double grid_fft_ms = ms_since(t0);

        double gdev = 0.0;
        for (size_t i = 0; i < grid_ref.size(); ++i)
            gdev = std::max(gdev, std::abs(grid_ref[i] - grid_fft[i]));

        std::printf("deg=%6d  batch(%d pts): serial %8.2f ms, omp %8.2f ms, dev %.2e\n", deg,
                    pts, serial_ms, omp_ms, dev);
        std::printf("            grid(N=%d): clenshaw %8.2f ms, dct %8.2f ms, dev %.2e\n", N,
                    grid_serial_ms, grid_fft_ms, gdev);
        // Clenshaw rounding grows linearly in the degree, so the agreement
        // tolerance has to as well
        double tol = std::max(1e-12, 5e-15 * deg);
        if (dev > tol || gdev > tol) {
            std::printf("kernel mismatch!\n");
            return 1;
        }
    }
    return 0;
}
