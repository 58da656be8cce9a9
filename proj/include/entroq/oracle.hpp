// Semantic model of the probability oracle: the projected block has singular
// values sqrt(p_i), polynomial transforms act on them directly, and every
// subroutine converts into oracle-use counts through the query ledger.

#pragma once

#include <string>
#include <vector>

#include "entroq/distribution.hpp"
#include "entroq/poly.hpp"

namespace entroq {

// Audit trail of oracle uses. Each entry cites the cost formula it was
// computed from; controlled and inverse uses count the same as plain ones.
struct QueryLedger {
    struct Entry {
        std::string subroutine;
        std::string formula;
        long long count;
    };
    std::vector<Entry> entries;
    long long total = 0;

    void charge(const std::string& subroutine, const std::string& formula, long long count);
    void merge(const QueryLedger& other);
    std::string to_csv() const;  // subroutine,formula,count with a final TOTAL row
};

struct OracleModel {
    Distribution dist;
    QueryLedger ledger;

    explicit OracleModel(Distribution d) : dist(std::move(d)) {}
};

// Result of one polynomial transform: the flagged branch carries amplitude
// sqrt(p_i) P(sqrt(p_i)) per outcome; everything else is orthogonal garbage
// tracked only by its squared mass.
struct FlaggedAmplitudes {
    std::vector<double> flagged;
    double residual_mass = 0.0;
};

// Applies a certified bounded polynomial to the singular values and charges
// degree-many oracle uses.
FlaggedAmplitudes apply_svt(OracleModel& o, const BoundedPoly& poly);

// Sum of squared flagged amplitudes, i.e. sum_i p_i P(sqrt(p_i))^2.
double power_sum(const FlaggedAmplitudes& f);

}  // namespace entroq
