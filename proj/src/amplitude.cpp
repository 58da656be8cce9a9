#include "entroq/amplitude.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace entroq {

namespace {

// T_L at y >= 0, stable on both branches
double cheb_T(double Lr, double y) {
    if (y <= 1.0) return std::cos(Lr * std::acos(y));
    return std::cosh(Lr * std::acosh(y));
}

// Fejer-type phase estimation kernel, period 1 in delta.
double qpe_kernel(double delta, int M) {
    double s = std::sin(M_PI * delta);
    if (std::abs(s) < 1e-15) return 1.0;
    double num = std::sin(M_PI * M * delta);
    return (num * num) / (static_cast<double>(M) * M * s * s);
}

void check_M(int M) {
    if (M < 2 || (M & (M - 1)) != 0) throw std::invalid_argument("QAE: M must be a power of two >= 2");
}

}  // namespace

double fixed_point_success(double lambda, double delta, long long L) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) throw std::invalid_argument("fixed_point: lambda");
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("fixed_point: delta");
    if (L < 1 || L % 2 == 0) throw std::invalid_argument("fixed_point: L must be odd and positive");
    double Lr = static_cast<double>(L);
    double t = std::cosh(std::acosh(1.0 / delta) / Lr);  // T_{1/L}(1/delta)
    double arg = t * std::sqrt(1.0 - lambda);
    double T = cheb_T(Lr, arg);
    return 1.0 - delta * delta * T * T;
}

long long amplify_rounds(double lambda, double delta, double c) {
    if (!(lambda > 0.0)) throw std::invalid_argument("amplify: zero overlap forbidden");
    double raw = c * std::log(2.0 / delta) / std::sqrt(std::min(lambda, 1.0));
    long long L = static_cast<long long>(std::ceil(raw));
    if (L < 1) L = 1;
    if (L % 2 == 0) ++L;
    return L;
}

AmplifyResult fixed_point_amplify(double lambda, double delta, double c, QueryLedger* ledger,
                                  long long unit_cost) {
    long long L = amplify_rounds(lambda, delta, c);
    AmplifyResult r;
    r.lambda = lambda;
    r.L = L;
    r.fidelity_sq = fixed_point_success(std::min(lambda, 1.0), delta, L);
    if (ledger) ledger->charge("amplify", "rounds-x-unit", L * unit_cost);
    return r;
}

double qae_grid_value(int j, int M) {
    double s = std::sin(M_PI * j / M);
    return s * s;
}

std::vector<double> qae_distribution(double a, int M) {
    check_M(M);
    if (!(a >= 0.0 && a <= 1.0)) throw std::invalid_argument("QAE: amplitude outside [0,1]");
    double theta = std::asin(std::sqrt(a)) / M_PI;  // in [0, 1/2]
    std::vector<double> full(M);
    for (int y = 0; y < M; ++y) {
        double q = static_cast<double>(y) / M;
        full[y] = 0.5 * (qpe_kernel(theta - q, M) + qpe_kernel(theta + q, M));
    }
    std::vector<double> out(M / 2 + 1);
    out[0] = full[0];
    out[M / 2] = full[M / 2];
    for (int j = 1; j < M / 2; ++j) out[j] = full[j] + full[M - j];
    return out;
}

QaeOutcome qae_estimate(double a, int M, std::uint64_t seed, QueryLedger* ledger,
                        long long unit_cost) {
    std::mt19937_64 gen(seed);
    double u = std::uniform_real_distribution<double>(0.0, 1.0)(gen);
    auto dist = qae_distribution(a, M);
    double acc = 0.0;
    int pick = static_cast<int>(dist.size()) - 1;
    for (size_t j = 0; j < dist.size(); ++j) {
        acc += dist[j];
        if (u <= acc) {
            pick = static_cast<int>(j);
            break;
        }
    }
    if (ledger) ledger->charge("qae", "grid-calls", static_cast<long long>(M) * unit_cost);
    return {qae_grid_value(pick, M), M, a};
}

double boosted_estimate(double a, int M, int rounds, std::uint64_t seed, QueryLedger* ledger,
                        long long unit_cost) {
    if (rounds < 1 || rounds % 2 == 0)
        throw std::invalid_argument("boosted_estimate: rounds must be odd");
    auto dist = qae_distribution(a, M);
    std::vector<double> cdf(dist.size());
    double acc = 0.0;
    for (size_t j = 0; j < dist.size(); ++j) {
        acc += dist[j];
        cdf[j] = acc;
    }
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::vector<double> draws(rounds);
    for (int r = 0; r < rounds; ++r) {
        double u = uni(gen);
        size_t j = std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin();
        if (j >= dist.size()) j = dist.size() - 1;
        draws[r] = qae_grid_value(static_cast<int>(j), M);
    }
    std::nth_element(draws.begin(), draws.begin() + rounds / 2, draws.end());
    if (ledger)
        ledger->charge("qae-boosted", "rounds-x-grid",
                       static_cast<long long>(rounds) * M * unit_cost);
    return draws[rounds / 2];
}

int qae_grid_for_error(double err, int max_M) {
    if (!(err > 0.0)) throw std::invalid_argument("qae_grid_for_error: err must be positive");
    for (int M = 8; M <= max_M; M *= 2) {
        double bound = M_PI / M + (M_PI / M) * (M_PI / M);
        if (bound <= err) return M;
    }
    return max_M;
}

}  // namespace entroq
