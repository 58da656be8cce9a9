// Finite probability distributions and exact entropy functionals.

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace entroq {

// Probability vector over [n]. Entries are validated on construction:
// nonnegative, summing to 1 within 1e-12. Inputs outside the tolerance are
// rejected rather than renormalized so test fixtures stay exact.
struct Distribution {
    std::vector<double> probs;

    int n() const { return static_cast<int>(probs.size()); }

    static Distribution from_probs(std::vector<double> p);
};

inline constexpr double kProbSumTol = 1e-12;

// Shannon entropy in bits, with the 0*log2(0) = 0 convention.
double shannon_entropy(const Distribution& d);

// Binary entropy -x log2 x - (1-x) log2(1-x), endpoints mapped to 0.
double binary_entropy(double x);

enum class Family { uniform, point, zipf, two_point, dyadic, explicit_ };

struct FamilyParams {
    double zipf_s = 1.0;                // zipf exponent, > 0
    double first_mass = 0.5;            // two_point: mass on outcome 1
    std::vector<double> probs;          // explicit_
};

Distribution make_distribution(Family family, int n, const FamilyParams& params = {});

Family family_from_name(std::string_view name);
std::string family_name(Family f);

// One probability per line, decimal notation; '#' starts a comment.
Distribution load_distribution(const std::string& path);

}  // namespace entroq
