#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "entroq/cascade.hpp"
#include "entroq/oracle.hpp"

using namespace entroq;

namespace {

// independent recurrence: walk the levels updating one residual amplitude
struct LevelWalk {
    std::vector<double> branch;
    double residual;
};

LevelWalk walk(const CascadeConfig& cfg, double x, int k) {
    LevelWalk w;
    w.residual = 1.0;
    for (int j = 1; j <= k; ++j) {
        double b = std::clamp((cfg.step(j))(x), -1.0, 1.0);
        double bp = std::sqrt(1.0 - b * b);
        w.branch.push_back(w.residual * b);
        w.residual *= bp;
    }
    return w;
}

}  // namespace

TEST_CASE("closed form equals the level-by-level recurrence") {
    PolyCache cache;
    auto cfg = CascadeConfig::make(8, 0.15, cache);
    for (double x : {0.001, 0.01, 0.03, 0.1, 0.2, 0.37, 0.5, 0.75, 0.99, 1.0}) {
        auto w = walk(cfg, x, 8);
        for (int j = 1; j <= 8; ++j) {
            CHECK(cascade_B(cfg, x, j) == doctest::Approx(w.branch[j - 1]).epsilon(1e-12));
        }
        CHECK(cascade_B_prime(cfg, x, 8) == doctest::Approx(w.residual).epsilon(1e-12));
    }
}

TEST_CASE("coefficient table matches the pointwise closed form") {
    PolyCache cache;
    auto cfg = CascadeConfig::make(6, 0.2, cache);
    auto d = make_distribution(Family::dyadic, 12);
    auto t = CoefficientTable::build(cfg, d);
    for (int j = 1; j <= 6; ++j)
        for (int i = 0; i < d.n(); ++i) {
            double x = std::sqrt(d.probs[i]);
            CHECK(t.B[j - 1][i] == doctest::Approx(cascade_B(cfg, x, j)).epsilon(1e-12));
            CHECK(t.B_prime[j - 1][i] ==
                  doctest::Approx(cascade_B_prime(cfg, x, j)).epsilon(1e-12));
        }
    auto csv = t.to_csv();
    CHECK(csv.find("level,i,beta") == 0);
}

TEST_CASE("structured state conserves norm") {
    PolyCache cache;
    auto cfg = CascadeConfig::make(7, 0.1, cache);
    for (Family fam : {Family::uniform, Family::zipf, Family::dyadic}) {
        auto d = make_distribution(fam, 16);
        auto s = cascade_state_pure(cfg, d, 7);
        CHECK(s.total_mass() == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("cascade_state charges the summed step degrees") {
    PolyCache cache;
    auto cfg = CascadeConfig::make(5, 0.2, cache);
    OracleModel o(make_distribution(Family::uniform, 8));
    cascade_state(o, cfg, 5);
    long long want = 0;
    for (int j = 1; j <= 5; ++j) want += cfg.step(j).degree();
    CHECK(o.ledger.total == want);
    CHECK(query_cost_Uk(cfg, 5) == want);
}

TEST_CASE("band mass concentrates on two levels") {
    PolyCache cache;
    for (double eps : {0.1, 0.05}) {
        auto cfg = CascadeConfig::make(10, eps, cache, 1);
        for (int i = 0; i <= 200; ++i) {
            double x = std::exp2(-10.0 * (200 - i) / 200.0);
            auto cc = check_concentration(cfg, x, 4.0);
            CHECK(cc.ok);
            CHECK(cc.mass <= 1.0 + 1e-12);
        }
    }
}

TEST_CASE("j* lands in the right band") {
    PolyCache cache;
    auto cfg = CascadeConfig::make(6, 0.1, cache, 1);
    CHECK(check_concentration(cfg, 1.0, 4.0).j_star == 1);
    CHECK(check_concentration(cfg, 0.5, 4.0).j_star == 1);
    CHECK(check_concentration(cfg, 0.26, 4.0).j_star == 2);
    CHECK(check_concentration(cfg, 0.25, 4.0).j_star == 2);
    CHECK(check_concentration(cfg, std::exp2(-6), 4.0).j_star == 6);
    CHECK_THROWS(check_concentration(cfg, std::exp2(-7), 4.0));
}

TEST_CASE("branch mass is bounded by the band ceiling") {
    // Sum(k) <= 4n/4^k + slack: flagged mass at level k comes from x near 2^-k
    PolyCache cache;
    int m = 8;
    double eps = 0.15;
    auto cfg = CascadeConfig::make(m, eps, cache);
    for (Family fam : {Family::uniform, Family::zipf, Family::dyadic}) {
        auto d = make_distribution(fam, 32);
        auto t = CoefficientTable::build(cfg, d);
        for (int k = 1; k <= m; ++k) {
            double sum = 0.0;
            for (int i = 0; i < d.n(); ++i) sum += d.probs[i] * t.B[k - 1][i] * t.B[k - 1][i];
            double bound = 4.0 * d.n() / std::pow(4.0, k) + 16.0 * m * eps * eps;
            CHECK(sum <= bound);
        }
    }
}

TEST_CASE("config validation") {
    PolyCache cache;
    CHECK_THROWS(CascadeConfig::make(0, 0.1, cache));
    CHECK_THROWS(CascadeConfig::make(3, 0.0, cache));
    auto cfg = CascadeConfig::make(3, 0.1, cache);
    CHECK(cfg.levels() == 3);
    CHECK(cfg.phi(2) == 0.25);
    CHECK_THROWS(beta_coefficients(cfg, 0.5, 4));
    CHECK_THROWS(cascade_state_pure(cfg, make_distribution(Family::uniform, 4), 9));
}
