#include "entroq/cascade.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace entroq {

CascadeConfig CascadeConfig::make(int m, double eps, PolyCache& cache, int extra_levels) {
    if (m < 1) throw std::invalid_argument("cascade: m must be >= 1");
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("cascade: eps outside (0,1)");
    CascadeConfig cfg;
    cfg.m = m;
    cfg.eps = eps;
    for (int j = 1; j <= m + extra_levels; ++j) {
        cfg.thresholds.push_back(std::ldexp(1.0, -j));
        cfg.step_polys.push_back(&cache.step(cfg.thresholds.back(), eps));
    }
    return cfg;
}

std::pair<double, double> beta_coefficients(const CascadeConfig& cfg, double x, int j) {
    if (j < 1 || j > cfg.levels()) throw std::out_of_range("beta_coefficients: level");
    double b = cfg.step(j)(x);
    b = std::clamp(b, -1.0, 1.0);
    return {b, std::sqrt(1.0 - b * b)};
}

double cascade_B(const CascadeConfig& cfg, double x, int j) {
    double prod = 1.0;
    for (int l = 1; l < j; ++l) prod *= beta_coefficients(cfg, x, l).second;
    return prod * beta_coefficients(cfg, x, j).first;
}

double cascade_B_prime(const CascadeConfig& cfg, double x, int j) {
    double prod = 1.0;
    for (int l = 1; l <= j; ++l) prod *= beta_coefficients(cfg, x, l).second;
    return prod;
}

CoefficientTable CoefficientTable::build(const CascadeConfig& cfg, const Distribution& d) {
    CoefficientTable t;
    const int n = d.n(), L = cfg.levels();
    t.x.reserve(n);
    for (double p : d.probs) t.x.push_back(std::sqrt(p));
    t.beta.assign(L, std::vector<double>(n));
    t.beta_prime.assign(L, std::vector<double>(n));
    t.B.assign(L, std::vector<double>(n));
    t.B_prime.assign(L, std::vector<double>(n));
    std::vector<double> running(n, 1.0);  // B'_{j-1}
    for (int j = 1; j <= L; ++j) {
        auto& bj = t.beta[j - 1];
        auto& bpj = t.beta_prime[j - 1];
        auto& Bj = t.B[j - 1];
        auto& Bpj = t.B_prime[j - 1];
#pragma omp parallel for schedule(static)
        for (int i = 0; i < n; ++i) {
            auto [b, bp] = beta_coefficients(cfg, t.x[i], j);
            bj[i] = b;
            bpj[i] = bp;
            Bj[i] = running[i] * b;
            Bpj[i] = running[i] * bp;
        }
        running = Bpj;
    }
    return t;
}

std::string CoefficientTable::to_csv() const {
    std::ostringstream out;
    out << "level,i,beta,beta_prime,B,B_prime\n";
    char buf[160];
    for (size_t j = 0; j < beta.size(); ++j)
        for (size_t i = 0; i < x.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%zu,%zu,%.17g,%.17g,%.17g,%.17g\n", j + 1, i,
                          beta[j][i], beta_prime[j][i], B[j][i], B_prime[j][i]);
            out << buf;
        }
    return out.str();
}

double StructuredState::branch_mass(int j) const {
    if (j < 1 || j > k) throw std::out_of_range("branch_mass: level");
    double s = 0.0;
    for (double a : branch[j - 1]) s += a * a;
    return s;
}

double StructuredState::residual_mass() const {
    double s = 0.0;
    for (double a : residual) s += a * a;
    return s;
}

double StructuredState::total_mass() const {
    double s = residual_mass();
    for (int j = 1; j <= k; ++j) s += branch_mass(j);
    return s;
}

StructuredState cascade_state_pure(const CascadeConfig& cfg, const Distribution& d, int k) {
    if (k < 1 || k > cfg.levels()) throw std::out_of_range("cascade_state: depth");
    CoefficientTable t = CoefficientTable::build(cfg, d);
    StructuredState s;
    s.k = k;
    const int n = d.n();
    s.branch.assign(k, std::vector<double>(n));
    s.residual.resize(n);
    for (int j = 1; j <= k; ++j)
        for (int i = 0; i < n; ++i) s.branch[j - 1][i] = t.x[i] * t.B[j - 1][i];
    for (int i = 0; i < n; ++i) s.residual[i] = t.x[i] * t.B_prime[k - 1][i];
    return s;
}

StructuredState cascade_state(OracleModel& o, const CascadeConfig& cfg, int k) {
    StructuredState s = cascade_state_pure(cfg, o.dist, k);
    o.ledger.charge("U_k", "cascade-deg-sum", query_cost_Uk(cfg, k));
    return s;
}

ConcentrationCheck check_concentration(const CascadeConfig& cfg, double x, double C) {
    if (!(x >= cfg.phi(cfg.m) && x <= 1.0))
        throw std::invalid_argument("check_concentration: x below phi_m or above 1");
    ConcentrationCheck out;
    out.j_star = std::max(1, static_cast<int>(std::ceil(-std::log2(x) - 1e-12)));
    if (out.j_star > cfg.m) out.j_star = cfg.m;
    if (out.j_star + 1 > cfg.levels())
        throw std::invalid_argument("check_concentration: need an extra cascade level");
    double b1 = cascade_B(cfg, x, out.j_star);
    double b2 = cascade_B(cfg, x, out.j_star + 1);
    out.mass = b1 * b1 + b2 * b2;
    out.ok = out.mass >= 1.0 - C * out.j_star * cfg.eps * cfg.eps;
    return out;
}

long long query_cost_Uk(const CascadeConfig& cfg, int k) {
    if (k < 1 || k > cfg.levels()) throw std::out_of_range("query_cost_Uk: depth");
    long long c = 0;
    for (int j = 1; j <= k; ++j) c += cfg.step(j).degree();
    return c;
}

}  // namespace entroq
