#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "entroq/cascade.hpp"
#include "entroq/estimator.hpp"
#include "entroq/oracle.hpp"

using namespace entroq;

TEST_CASE("parameter schedule examples") {
    auto p = choose_params(1024, 0.1);
    CHECK(p.m == 15);
    CHECK(p.delta == doctest::Approx(std::sqrt(0.1 / 60.0)).epsilon(1e-12));
    CHECK(p.eta == doctest::Approx(0.025).epsilon(1e-12));
    CHECK(p.delta_amp == doctest::Approx(0.1 / 120.0).epsilon(1e-12));
    CHECK(choose_params(2, 1.0).m == 2);
    CHECK_THROWS(choose_params(1, 0.1));
    CHECK_THROWS(choose_params(8, 0.0));
}

TEST_CASE("exact v matches an independent double sum") {
    // rebuild the assembly from scratch: pointwise closed-form cascade
    // amplitudes and the same per-level budget split
    PolyCache cache;
    for (Family fam : {Family::uniform, Family::dyadic}) {
        auto d = make_distribution(fam, 16);
        double eps = 0.3;
        auto p = choose_params(d.n(), eps);
        auto cfg = CascadeConfig::make(p.m, std::min(p.delta, 0.03), cache);
        double v = -2.0;
        for (int k = 1; k <= p.m; ++k) {
            double eta_k = std::min(eps / 4.0, eps / (32.0 * (k + 1)));
            const BoundedPoly& sk = cache.sk(k, eta_k);
            double term = 0.0;
            for (double pi : d.probs) {
                double x = std::sqrt(pi);
                double B = cascade_B(cfg, x, k);
                double S = sk(x);
                term += pi * S * S * B * B;
            }
            v += 8.0 * term * (k + 1);
        }
        CHECK(exact_v(d, p, cache) == doctest::Approx(v).epsilon(1e-12));
    }
}

TEST_CASE("exact v tracks the true entropy") {
    PolyCache cache;
    for (Family fam : {Family::uniform, Family::zipf, Family::dyadic}) {
        for (double eps : {0.5, 0.25}) {
            auto d = make_distribution(fam, 64);
            auto p = choose_params(d.n(), eps);
            CHECK(std::abs(exact_v(d, p, cache) - shannon_entropy(d)) < eps / 2);
        }
    }
}

TEST_CASE("noiseless trial reproduces exact v") {
    EstimateOptions opt;
    opt.exact_qae = true;
    auto d = make_distribution(Family::zipf, 32);
    auto plan = make_plan(d, 0.25, opt);
    auto rep = run_trial(plan, 7);
    CHECK(rep.v == doctest::Approx(plan.exact_v).epsilon(1e-10));
    // plan terms and level fields agree
    double v = -2.0;
    for (const auto& lv : plan.levels) v += 8.0 * lv.vprime_true * lv.sum_true * (lv.k + 1);
    CHECK(v == doctest::Approx(plan.exact_v).epsilon(1e-12));
}

TEST_CASE("trials are deterministic and ledgered") {
    auto d = make_distribution(Family::uniform, 16);
    auto plan = make_plan(d, 0.25);
    auto a = run_trial(plan, 123);
    auto b = run_trial(plan, 123);
    auto c = run_trial(plan, 124);
    CHECK(a.v == b.v);
    CHECK(a.ledger.total == c.ledger.total);  // cost fixed by the plan
    CHECK(a.ledger.total == plan.trial_ledger.total);
    CHECK(a.ledger.total > 0);
    auto csv = a.to_csv();
    CHECK(csv.find("k,skipped") == 0);
    CHECK(csv.find("SUMMARY") != std::string::npos);
    CHECK(a.to_text().find("estimate=") != std::string::npos);
}

TEST_CASE("monte carlo success rate on a small fixture") {
    auto d = make_distribution(Family::uniform, 8);
    auto plan = make_plan(d, 0.25);
    int hits = 0;
    for (int s = 0; s < 200; ++s)
        if (run_trial(plan, s).abs_error <= 0.25) ++hits;
    CHECK(hits >= 134);  // 2/3 of 200
}

TEST_CASE("deep empty levels are skipped but shallow ones are not") {
    auto plan = make_plan(make_distribution(Family::uniform, 64), 0.5);
    int active = 0;
    for (const auto& lv : plan.levels) active += lv.active ? 1 : 0;
    CHECK(active >= 1);
    CHECK(active < plan.params.m);
    auto rep = run_trial(plan, 1);
    CHECK(rep.skipped_levels() == plan.params.m - active);
}

TEST_CASE("estimate_entropy merges the ledger into the oracle") {
    OracleModel o(make_distribution(Family::dyadic, 8));
    auto rep = estimate_entropy(o, 0.5, 42);
    CHECK(o.ledger.total == rep.ledger.total);
    CHECK(rep.abs_error <= 1.0);
}

TEST_CASE("cost constant scales the ledger roughly linearly") {
    auto d = make_distribution(Family::uniform, 32);
    EstimateOptions opt;
    opt.exact_qae = true;
    auto p1 = make_plan(d, 0.5, opt);
    opt.cost_constant = 2.0;
    auto p2 = make_plan(d, 0.5, opt);
    double ratio = static_cast<double>(p2.trial_ledger.total) / p1.trial_ledger.total;
    CHECK(ratio > 1.9);
    CHECK(ratio < 5.0);  // amplification rounds also stretch with c
}

TEST_CASE("folklore baseline estimates within eps using fewer queries") {
    EstimateOptions opt;
    opt.exact_qae = true;
    for (Family fam : {Family::uniform, Family::zipf}) {
        auto d = make_distribution(fam, 64);
        auto fp = make_folklore_plan(d, 0.25, opt);
        auto rep = run_folklore_trial(fp, 5);
        CHECK(rep.abs_error <= 0.25);
        auto mp = make_plan(d, 0.25, opt);
        CHECK(fp.trial_ledger.total < mp.trial_ledger.total);  // desk scale favors it
    }
}

TEST_CASE("folklore sampling is deterministic") {
    OracleModel o(make_distribution(Family::uniform, 16));
    auto a = folklore_estimate(o, 0.5, 11);
    OracleModel o2(make_distribution(Family::uniform, 16));
    auto b = folklore_estimate(o2, 0.5, 11);
    CHECK(a.v == b.v);
    CHECK(o.ledger.total == o2.ledger.total);
}

TEST_CASE("invalid options are rejected") {
    auto d = make_distribution(Family::uniform, 4);
    EstimateOptions opt;
    opt.boost_rounds = 4;
    CHECK_THROWS(make_plan(d, 0.5, opt));
}
