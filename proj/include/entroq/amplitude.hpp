// Simulated fixed-point amplitude amplification and canonical amplitude
// estimation, both modeled exactly on their two-dimensional invariant
// subspace. Everything stochastic is driven by an explicit seed.

#pragma once

#include <cstdint>
#include <vector>

#include "entroq/oracle.hpp"

namespace entroq {

struct AmplifyResult {
    double fidelity_sq = 0.0;  // |<target|output>|^2
    long long L = 0;           // amplification rounds used
    double lambda = 0.0;       // initial overlap squared
};

// Success probability of the Chebyshev fixed-point sequence after L rounds
// on initial overlap lambda, with target fidelity deficit delta^2.
double fixed_point_success(double lambda, double delta, long long L);

// Picks L as the smallest odd integer >= c log(2/delta)/sqrt(lambda) and
// reports the resulting fidelity; charges L rounds times unit_cost if a
// ledger is supplied.
AmplifyResult fixed_point_amplify(double lambda, double delta, double c = 1.0,
                                  QueryLedger* ledger = nullptr, long long unit_cost = 1);

// Number of amplification rounds without running the simulation.
long long amplify_rounds(double lambda, double delta, double c = 1.0);

// Canonical phase-estimation QAE on an M-point grid, M a power of two >= 2.
// Entry j in [0, M/2] is the probability of estimate sin^2(pi j / M), with
// the two phase preimages merged.
std::vector<double> qae_distribution(double a, int M);

double qae_grid_value(int j, int M);

struct QaeOutcome {
    double estimate = 0.0;
    int M = 0;
    double true_amp = 0.0;
};

// One sample from qae_distribution; charges M times unit_cost if a ledger is
// supplied.
QaeOutcome qae_estimate(double a, int M, std::uint64_t seed, QueryLedger* ledger = nullptr,
                        long long unit_cost = 1);

// Median of an odd number of independent estimates; charges rounds * M units.
double boosted_estimate(double a, int M, int rounds, std::uint64_t seed,
                        QueryLedger* ledger = nullptr, long long unit_cost = 1);

// Smallest power of two M >= 8 with pi/M + (pi/M)^2 <= err, i.e. the
// worst-case estimation error bound over all amplitudes is below err.
int qae_grid_for_error(double err, int max_M = 1 << 30);

}  // namespace entroq
