// Chebyshev-series kernels: fitting, pointwise and whole-grid evaluation.
//
// Two evaluation paths are kept side by side: a serial Clenshaw reference,
// and the production kernels (OpenMP batch Clenshaw for scattered points,
// DCT-based transforms for dense Chebyshev grids). Tests cross-check the
// fast paths against the reference; tools/bench_kernels times them.

#pragma once

#include <functional>
#include <span>
#include <vector>

namespace entroq::cheb {

// sum_k c[k] T_k(t) at a single t in [-1,1]. Clenshaw recurrence.
double clenshaw(std::span<const double> c, double t);

// Serial reference batch evaluation.
void eval_batch_serial(std::span<const double> c, std::span<const double> t,
                       std::span<double> out);

// OpenMP batch evaluation over scattered points.
void eval_batch(std::span<const double> c, std::span<const double> t,
                std::span<double> out);

// Chebyshev-Lobatto nodes t_j = cos(pi j / N), j = 0..N (descending).
std::vector<double> lobatto_nodes(int N);

// Chebyshev-Gauss nodes t_j = cos(pi (j+1/2) / N), j = 0..N-1.
std::vector<double> gauss_nodes(int N);

// Coefficients of the degree-N interpolant through values at lobatto_nodes(N).
// DCT-I via FFTW, O(N log N).
std::vector<double> fit_lobatto(std::span<const double> values);

// Values of the series c at lobatto_nodes(N), N >= c.size()-1. DCT-I.
std::vector<double> grid_values_lobatto(std::span<const double> c, int N);

// Values of the series c at gauss_nodes(N), N >= c.size(). DCT-III.
std::vector<double> grid_values_gauss(std::span<const double> c, int N);

// Serial reference for the grid evaluators (per-point Clenshaw).
std::vector<double> grid_values_lobatto_serial(std::span<const double> c, int N);

// Sample f at the Lobatto nodes of size N (OpenMP over nodes).
std::vector<double> sample_lobatto(const std::function<double(double)>& f, int N);

// Smallest "FFT-friendly" integer >= n: any size up to 16, then m * 2^a
// with m in [16, 31]. Roughly 6% granularity.
int next_nice(int n);

}  // namespace entroq::cheb
