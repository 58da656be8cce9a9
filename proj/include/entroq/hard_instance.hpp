// Hard instances for the query lower bound: a distribution encoded as
// Hamming weights of n bit strings of length k, the induced (n+1)-outcome
// distribution q reachable through a discrete oracle, and the exact entropy
// identity tying H(p) to H(q).

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "entroq/distribution.hpp"

namespace entroq {

struct HardInstance {
    int n = 0;  // number of bit strings
    int k = 0;  // bits per string
    std::vector<std::vector<std::uint8_t>> bits;  // n rows of k entries in {0,1}
    std::vector<long long> f;                     // row Hamming weights
    long long R = 0;                              // total weight, R = t*n

    Distribution p;  // p_i = f_i / R over [n]
    Distribution q;  // q_i = f_i / (nk), q_{n} = 1 - R/(nk) over [n+1]

    // t = R/n carried as the exact ratio of integers
    double t() const { return static_cast<double>(R) / n; }
};

// Derives all fields from an explicit bit matrix. An all-zero matrix (R = 0)
// is rejected.
HardInstance build_hard_instance(std::vector<std::vector<std::uint8_t>> bits);

// Random instance with R = round(target_t * n) ones placed uniformly among
// the n*k cells.
HardInstance build_hard_instance(int n, int k, double target_t, std::uint64_t seed);

// Text format: n lines of k characters in {0,1}; blank lines and lines
// starting with '#' are skipped.
HardInstance load_hard_instance(const std::string& path);

// The 3-step sampler for q: uniform row i, uniform column j, outcome i if
// bit set, else the residual outcome n. Deterministic given the seed.
int sample_q(const HardInstance& inst, std::uint64_t seed);

// Explicit function table over the nk cells, row-major; entry is the sampler
// outcome for that cell. Realizes q as a counting measure.
std::vector<int> discrete_oracle_view(const HardInstance& inst);

struct EntropyRelation {
    double lhs = 0.0;      // H(p)
    double rhs = 0.0;      // (k/t) * (H(q) - binary_entropy(t/k))
    double max_dev = 0.0;  // |lhs - rhs|
};

// Degenerate t/k in {0,1} is rejected since the binary entropy term carries
// no information there.
EntropyRelation entropy_relation_check(const HardInstance& inst);

}  // namespace entroq
