#include "entroq/chebyshev.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <stdexcept>

namespace entroq::cheb {

namespace {
// FFTW planner calls are not thread-safe.
std::mutex g_fftw_mutex;

struct FftwBuf {
    double* p = nullptr;
    explicit FftwBuf(size_t n) : p(fftw_alloc_real(n)) {
        if (!p) throw std::bad_alloc();
    }
    ~FftwBuf() { fftw_free(p); }
    FftwBuf(const FftwBuf&) = delete;
    FftwBuf& operator=(const FftwBuf&) = delete;
};

void run_r2r(int n, double* in, double* out, fftw_r2r_kind kind) {
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(g_fftw_mutex);
        plan = fftw_plan_r2r_1d(n, in, out, kind, FFTW_ESTIMATE);
    }
    if (!plan) throw std::runtime_error("fftw plan creation failed");
    fftw_execute(plan);
    std::lock_guard<std::mutex> lock(g_fftw_mutex);
    fftw_destroy_plan(plan);
}
}  // namespace

double clenshaw(std::span<const double> c, double t) {
    double b1 = 0.0, b2 = 0.0;
    const double two_t = 2.0 * t;
    for (size_t k = c.size(); k-- > 1;) {
        double b0 = c[k] + two_t * b1 - b2;
        b2 = b1;
        b1 = b0;
    }
    return (c.empty() ? 0.0 : c[0]) + t * b1 - b2;
}

void eval_batch_serial(std::span<const double> c, std::span<const double> t,
                       std::span<double> out) {
    for (size_t i = 0; i < t.size(); ++i) out[i] = clenshaw(c, t[i]);
}

void eval_batch(std::span<const double> c, std::span<const double> t,
                std::span<double> out) {
    const long n = static_cast<long>(t.size());
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i) out[i] = clenshaw(c, t[i]);
}

std::vector<double> lobatto_nodes(int N) {
    std::vector<double> t(N + 1);
    for (int j = 0; j <= N; ++j) t[j] = std::cos(M_PI * j / N);
    t[0] = 1.0;
    t[N] = -1.0;
    if (N % 2 == 0) t[N / 2] = 0.0;
    return t;
}

std::vector<double> gauss_nodes(int N) {
    std::vector<double> t(N);
    for (int j = 0; j < N; ++j) t[j] = std::cos(M_PI * (j + 0.5) / N);
    return t;
}

std::vector<double> fit_lobatto(std::span<const double> values) {
    const int N = static_cast<int>(values.size()) - 1;
    if (N < 1) throw std::invalid_argument("fit_lobatto: need at least 2 values");
    FftwBuf in(N + 1), out(N + 1);
    for (int j = 0; j <= N; ++j) in.p[j] = values[j];
    run_r2r(N + 1, in.p, out.p, FFTW_REDFT00);
    std::vector<double> c(N + 1);
    for (int k = 0; k <= N; ++k) c[k] = out.p[k] / N;
    c[0] *= 0.5;
    c[N] *= 0.5;
    return c;
}

std::vector<double> grid_values_lobatto(std::span<const double> c, int N) {
    const int d = static_cast<int>(c.size()) - 1;
    if (d > N) throw std::invalid_argument("grid_values_lobatto: N < degree");
    FftwBuf in(N + 1), out(N + 1);
    in.p[0] = c.empty() ? 0.0 : c[0];
    for (int k = 1; k <= N; ++k) in.p[k] = (k <= d) ? 0.5 * c[k] : 0.0;
    run_r2r(N + 1, in.p, out.p, FFTW_REDFT00);
    return std::vector<double>(out.p, out.p + N + 1);
}

std::vector<double> grid_values_gauss(std::span<const double> c, int N) {
    const int d = static_cast<int>(c.size()) - 1;
    if (d >= N) throw std::invalid_argument("grid_values_gauss: N <= degree");
    FftwBuf in(N), out(N);
    in.p[0] = c.empty() ? 0.0 : c[0];
    for (int k = 1; k < N; ++k) in.p[k] = (k <= d) ? 0.5 * c[k] : 0.0;
    run_r2r(N, in.p, out.p, FFTW_REDFT01);
    return std::vector<double>(out.p, out.p + N);
}

std::vector<double> grid_values_lobatto_serial(std::span<const double> c, int N) {
    auto t = lobatto_nodes(N);
    std::vector<double> v(N + 1);
    eval_batch_serial(c, t, v);
    return v;
}

std::vector<double> sample_lobatto(const std::function<double(double)>& f, int N) {
    std::vector<double> v(N + 1);
#pragma omp parallel for schedule(static)
    for (int j = 0; j <= N; ++j) {
        double t = std::cos(M_PI * j / N);
        v[j] = f(t);
    }
    v[0] = f(1.0);
    v[N] = f(-1.0);
    return v;
}

int next_nice(int n) {
    if (n <= 4) return 4;
    if (n <= 16) return n;
    int a = 0;
    long long m = n;
    while (m > 31) {
        m = (m + 1) / 2;  // ceil divide keeps result >= n
        ++a;
    }
    long long r = m << a;
    if (r < 16) r = 16;
    return static_cast<int>(r);
}

}  // namespace entroq::cheb
