#include "entroq/oracle.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace entroq {

void QueryLedger::charge(const std::string& subroutine, const std::string& formula,
                         long long count) {
    if (count < 0) throw std::invalid_argument("ledger charge: negative count");
    entries.push_back({subroutine, formula, count});
    total += count;
}

void QueryLedger::merge(const QueryLedger& other) {
    entries.insert(entries.end(), other.entries.begin(), other.entries.end());
    total += other.total;
}

std::string QueryLedger::to_csv() const {
    std::ostringstream out;
    out << "subroutine,formula,count\n";
    for (const auto& e : entries) out << e.subroutine << "," << e.formula << "," << e.count << "\n";
    out << "TOTAL,," << total << "\n";
    return out.str();
}

FlaggedAmplitudes apply_svt(OracleModel& o, const BoundedPoly& poly) {
    if (!poly.certified())
        throw std::invalid_argument("apply_svt: polynomial lacks a valid boundedness certificate");
    FlaggedAmplitudes out;
    out.flagged.reserve(o.dist.probs.size());
    double mass = 0.0;
    for (double p : o.dist.probs) {
        double x = std::sqrt(p);
        double amp = x * poly(x);
        out.flagged.push_back(amp);
        mass += amp * amp;
    }
    out.residual_mass = 1.0 - mass;
    o.ledger.charge("svt", "deg", poly.degree());
    return out;
}

double power_sum(const FlaggedAmplitudes& f) {
    double s = 0.0;
    for (double a : f.flagged) s += a * a;
    return s;
}

}  // namespace entroq
