#include "entroq/distribution.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace entroq {

Distribution Distribution::from_probs(std::vector<double> p) {
    if (p.empty()) throw std::invalid_argument("distribution: empty probability vector");
    double sum = 0.0;
    for (double v : p) {
        if (!(v >= 0.0)) throw std::invalid_argument("distribution: negative or NaN probability");
        sum += v;
    }
    if (std::abs(sum - 1.0) > kProbSumTol)
        throw std::invalid_argument("distribution: probabilities sum to " + std::to_string(sum));
    return Distribution{std::move(p)};
}

double shannon_entropy(const Distribution& d) {
    double h = 0.0;
    for (double p : d.probs)
        if (p > 0.0) h -= p * std::log2(p);
    return h;
}

double binary_entropy(double x) {
    if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("binary_entropy: x outside [0,1]");
    double h = 0.0;
    if (x > 0.0) h -= x * std::log2(x);
    if (x < 1.0) h -= (1.0 - x) * std::log2(1.0 - x);
    return h;
}

Distribution make_distribution(Family family, int n, const FamilyParams& params) {
    if (n < 1) throw std::invalid_argument("make_distribution: n must be >= 1");
    std::vector<double> p;
    switch (family) {
        case Family::uniform:
            p.assign(n, 1.0 / n);
            break;
        case Family::point:
            p.assign(n, 0.0);
            p[0] = 1.0;
            break;
        case Family::zipf: {
            if (!(params.zipf_s > 0.0)) throw std::invalid_argument("zipf: exponent must be > 0");
            p.resize(n);
            double sum = 0.0;
            for (int i = 0; i < n; ++i) sum += std::pow(i + 1.0, -params.zipf_s);
            for (int i = 0; i < n; ++i) p[i] = std::pow(i + 1.0, -params.zipf_s) / sum;
            break;
        }
        case Family::two_point: {
            if (n != 2) throw std::invalid_argument("two_point: n must be 2");
            double a = params.first_mass;
            if (!(a >= 0.0 && a <= 1.0)) throw std::invalid_argument("two_point: mass outside [0,1]");
            p = {a, 1.0 - a};
            break;
        }
        case Family::dyadic: {
            // 1/2, 1/4, ..., 1/2^{n-1}, 1/2^{n-1}: sums to 1 exactly.
            if (n < 2) throw std::invalid_argument("dyadic: n must be >= 2");
            p.resize(n);
            for (int i = 0; i < n - 1; ++i) p[i] = std::ldexp(1.0, -(i + 1));
            p[n - 1] = std::ldexp(1.0, -(n - 1));
            break;
        }
        case Family::explicit_:
            if (static_cast<int>(params.probs.size()) != n)
                throw std::invalid_argument("explicit: params.probs length mismatch");
            p = params.probs;
            break;
    }
    return Distribution::from_probs(std::move(p));
}

Family family_from_name(std::string_view name) {
    if (name == "uniform") return Family::uniform;
    if (name == "point") return Family::point;
    if (name == "zipf") return Family::zipf;
    if (name == "two_point") return Family::two_point;
    if (name == "dyadic") return Family::dyadic;
    if (name == "explicit") return Family::explicit_;
    throw std::invalid_argument("unknown distribution family: " + std::string(name));
}

std::string family_name(Family f) {
    switch (f) {
        case Family::uniform: return "uniform";
        case Family::point: return "point";
        case Family::zipf: return "zipf";
        case Family::two_point: return "two_point";
        case Family::dyadic: return "dyadic";
        case Family::explicit_: return "explicit";
    }
    return "?";
}

Distribution load_distribution(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open distribution file: " + path);
    std::vector<double> p;
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ss(line);
        double v;
        if (ss >> v) p.push_back(v);
    }
    return Distribution::from_probs(std::move(p));
}

}  // namespace entroq
