// Singular value separation cascade: per-level step responses beta_j with
// complements beta'_j, their running products B_j, B'_j, the branch-indexed
// state they induce, band concentration checks, and the cascade query cost.

#pragma once

#include <utility>
#include <vector>

#include "entroq/distribution.hpp"
#include "entroq/oracle.hpp"
#include "entroq/poly.hpp"

namespace entroq {

struct CascadeConfig {
    int m = 0;                    // number of levels
    double eps = 0.0;             // per-level separation error
    std::vector<double> thresholds;                // phi_j = 2^-j, j = 1..m
    std::vector<const BoundedPoly*> step_polys;    // one per level, cache-owned

    // Builds (and caches) the m step polynomials. extra_levels adds levels
    // past m, which the concentration check needs at the last band.
    static CascadeConfig make(int m, double eps, PolyCache& cache, int extra_levels = 0);

    double phi(int j) const { return thresholds.at(j - 1); }
    const BoundedPoly& step(int j) const { return *step_polys.at(j - 1); }
    int levels() const { return static_cast<int>(step_polys.size()); }
};

// (beta_j(x), beta'_j(x)) with beta'_j = sqrt(1 - beta_j^2) exactly.
std::pair<double, double> beta_coefficients(const CascadeConfig& cfg, double x, int j);

// B_j(x) = beta_j(x) * prod_{l<j} beta'_l(x); B'_j(x) = prod_{l<=j} beta'_l(x).
double cascade_B(const CascadeConfig& cfg, double x, int j);
double cascade_B_prime(const CascadeConfig& cfg, double x, int j);

// Per-support-point coefficient table over the distribution's sqrt(p_i).
struct CoefficientTable {
    std::vector<double> x;  // sqrt(p_i)
    // outer index: level j-1; inner: support point i
    std::vector<std::vector<double>> beta, beta_prime, B, B_prime;

    static CoefficientTable build(const CascadeConfig& cfg, const Distribution& d);
    std::string to_csv() const;  // level,i,beta,beta_prime,B,B_prime
};

// Branch-indexed amplitude table of the depth-k cascade state: branch j holds
// sqrt(p_i) B_j(sqrt(p_i)), the residual holds sqrt(p_i) B'_k(sqrt(p_i)).
struct StructuredState {
    int k = 0;
    std::vector<std::vector<double>> branch;  // [j-1][i]
    std::vector<double> residual;

    double branch_mass(int j) const;  // Sum(j)
    double residual_mass() const;
    double total_mass() const;
};

// Builds the state and charges the cascade cost (sum of step degrees up to k).
StructuredState cascade_state(OracleModel& o, const CascadeConfig& cfg, int k);

// Same state computed without an oracle or ledger, for deterministic reuse.
StructuredState cascade_state_pure(const CascadeConfig& cfg, const Distribution& d, int k);

struct ConcentrationCheck {
    int j_star = 0;
    double mass = 0.0;
    bool ok = false;
};

// Band test at x in [phi_m, 1]: locates the dyadic band [phi_j, phi_{j-1})
// (left-closed, x = 1 mapped to band 1) and checks
// B_j^2 + B_{j+1}^2 >= 1 - C j eps^2. Needs cfg built with an extra level
// when x falls in the last band.
ConcentrationCheck check_concentration(const CascadeConfig& cfg, double x, double C = 4.0);

// Oracle uses needed to reach depth k: sum_{j<=k} deg(step_j).
long long query_cost_Uk(const CascadeConfig& cfg, int k);

}  // namespace entroq
