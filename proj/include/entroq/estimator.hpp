// Entropy estimation pipeline: parameter schedule, per-level amplified
// estimation of the flag amplitude and the branch mass, assembly of
// v = -2 + 8 sum_k v_k, the deterministic exact-v oracle, and the
// single-polynomial folklore baseline.
//
// A plan is built once per (distribution, eps): polynomials, cascade tables,
// QAE grids, amplification rounds, and the per-trial query ledger are all
// deterministic. Individual trials then only sample QAE outcomes.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "entroq/cascade.hpp"
#include "entroq/distribution.hpp"
#include "entroq/oracle.hpp"
#include "entroq/poly.hpp"

namespace entroq {

struct EstimatorParams {
    int n = 0;
    double eps = 0.0;
    int m = 0;             // ceil(log2(2n/eps)) levels
    double delta = 0.0;    // separation error sqrt(eps/(4m))
    double eta = 0.0;      // polynomial error eps/4
    double delta_amp = 0.0;  // amplification fidelity deficit eps/(8m)
    int boost_rounds = 15;
    double cost_constant = 1.0;
};

EstimatorParams choose_params(int n, double eps);

struct EstimateOptions {
    bool exact_qae = false;  // replace sampling by exact amplitudes
    int boost_rounds = 15;
    double cost_constant = 1.0;
};

struct LevelPlan {
    int k = 0;
    bool active = false;  // branch mass above the skip cutoff
    double sum_true = 0.0;
    double vprime_true = 0.0;
    int M1 = 0, M2 = 0;
    long long L = 0;
    long long cost_Uk = 0, deg_Sk = 0;
    std::vector<double> cdf1, cdf2;  // QAE outcome CDFs (sampling mode only)
};

struct EstimatorPlan {
    EstimatorParams params;
    Distribution dist;
    double exact_entropy = 0.0;
    double exact_v = 0.0;  // noiseless assembly over all levels
    bool exact_qae = false;
    std::vector<LevelPlan> levels;
    QueryLedger trial_ledger;  // deterministic charges for one trial
};

struct LevelReport {
    int k = 0;
    bool skipped = false;
    double sum_true = 0.0, sum_est = 0.0, vprime_est = 0.0, v_k = 0.0;
    int M1 = 0, M2 = 0;
    long long L = 0;
};

struct EstimateReport {
    EstimatorParams params;
    std::uint64_t seed = 0;
    std::vector<LevelReport> levels;
    double v = 0.0;
    double exact_entropy = 0.0;
    double abs_error = 0.0;
    QueryLedger ledger;

    int skipped_levels() const;
    std::string to_csv() const;
    std::string to_text() const;
};

// Deterministic v from the true probabilities, no sampling: the reference
// every stochastic path is checked against. Per-level terms via the vector
// overload.
double exact_v(const Distribution& d, const EstimatorParams& p, PolyCache& cache);
std::vector<double> exact_v_terms(const Distribution& d, const EstimatorParams& p,
                                  PolyCache& cache);

EstimatorPlan make_plan(const Distribution& d, double eps, const EstimateOptions& opt = {},
                        PolyCache& cache = global_poly_cache());
EstimateReport run_trial(const EstimatorPlan& plan, std::uint64_t seed);

// Plan + one trial; merges the trial's charges into the oracle's ledger.
EstimateReport estimate_entropy(OracleModel& o, double eps, std::uint64_t seed,
                                const EstimateOptions& opt = {});

// Single-polynomial baseline: sqrt-log transform with x-cutoff
// sqrt(eps/(2n)), one boosted QAE.
struct FolklorePlan {
    EstimatorParams params;
    Distribution dist;
    double exact_entropy = 0.0;
    double beta_x = 0.0;
    double scale = 0.0;      // H = scale * amplitude
    double a_true = 0.0;
    int M = 0;
    long long deg = 0;
    bool exact_qae = false;
    std::vector<double> cdf;
    QueryLedger trial_ledger;
};

FolklorePlan make_folklore_plan(const Distribution& d, double eps, const EstimateOptions& opt = {},
                                PolyCache& cache = global_poly_cache());
EstimateReport run_folklore_trial(const FolklorePlan& plan, std::uint64_t seed);
EstimateReport folklore_estimate(OracleModel& o, double eps, std::uint64_t seed,
                                 const EstimateOptions& opt = {});

}  // namespace entroq
