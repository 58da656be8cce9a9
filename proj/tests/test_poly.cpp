#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "entroq/chebyshev.hpp"
#include "entroq/poly.hpp"

using namespace entroq;

TEST_CASE("clenshaw matches the trig definition of T_k") {
    std::vector<double> c(9, 0.0);
    c[4] = 1.0;
    CHECK(cheb::clenshaw(c, 0.5) == doctest::Approx(-0.5).epsilon(1e-14));  // T_4(0.5)
    for (double t : {-0.9, -0.3, 0.1, 0.7, 1.0}) {
        double want = std::cos(4.0 * std::acos(t));
        CHECK(cheb::clenshaw(c, t) == doctest::Approx(want).epsilon(1e-13));
    }
}

TEST_CASE("batch and grid kernels agree with the serial reference") {
    std::vector<double> c = {0.2, -0.1, 0.05, 0.3, -0.07, 0.01};
    std::vector<double> t;
    for (int i = 0; i <= 100; ++i) t.push_back(-1.0 + 0.02 * i);
    std::vector<double> a(t.size()), b(t.size());
    cheb::eval_batch_serial(c, t, a);
    cheb::eval_batch(c, t, b);
    for (size_t i = 0; i < t.size(); ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-14));

    int N = 64;
    auto g1 = cheb::grid_values_lobatto_serial(c, N);
    auto g2 = cheb::grid_values_lobatto(c, N);
    REQUIRE(g1.size() == g2.size());
    for (size_t i = 0; i < g1.size(); ++i)
        CHECK(g1[i] == doctest::Approx(g2[i]).epsilon(1e-12));
}

TEST_CASE("fit round trip recovers coefficients") {
    auto f = [](double t) { return 0.3 - 0.2 * t + 0.5 * (2 * t * t - 1); };
    auto vals = cheb::sample_lobatto(f, 16);
    auto c = cheb::fit_lobatto(vals);
    CHECK(c[0] == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(c[1] == doctest::Approx(-0.2).epsilon(1e-12));
    CHECK(c[2] == doctest::Approx(0.5).epsilon(1e-12));
    for (size_t k = 3; k < c.size(); ++k) CHECK(std::abs(c[k]) < 1e-12);
}

TEST_CASE("S_1 hits its anchor value at x=1") {
    auto s = make_Sk(1, 0.01);
    // target sqrt(log2(2/1)) / (2 sqrt 2) = 1/(2 sqrt 2)
    CHECK(std::abs(s(1.0) - 1.0 / (2.0 * std::sqrt(2.0))) <= 0.01 + 1e-12);
    CHECK(s.certified());
    CHECK(s.parity == Parity::even);
}

TEST_CASE("step polynomial clauses at phi=0.25") {
    auto p = make_step_poly(0.25, 0.1);
    CHECK(p.certified());
    for (double x = 0.0; x <= 0.25; x += 1.0 / 256) CHECK(p(x) <= 0.1 + 1e-12);
    double hi = std::sqrt(1.0 - 0.01);
    for (double x = 0.5; x <= 1.0; x += 1.0 / 256) CHECK(p(x) >= hi - 1e-12);
    for (double x = -1.0; x <= 1.0; x += 1.0 / 128) {
        CHECK(std::abs(p(x)) <= 1.0 + 1e-9);
        CHECK(p(x) == doctest::Approx(p(-x)).epsilon(1e-13));  // even
    }
}

TEST_CASE("sqrt-log approximant tracks the target on its interval") {
    double beta = 1.0 / 32.0, eta = 0.005;
    auto s = approx_sqrt_log(beta, eta);
    CHECK(s.certified());
    double L = std::log2(1.0 / beta);
    for (double x = beta; x <= 1.0 - beta; x += 1e-3) {
        double want = std::sqrt(std::log2(1.0 / x)) / (2.0 * std::sqrt(L));
        CHECK(std::abs(s(x) - want) <= eta + 1e-12);
    }
}

TEST_CASE("certificates carry offset-grid measurements") {
    auto s = make_Sk(3, 0.02);
    REQUIRE(!s.cert.empty());
    for (const auto& e : s.cert) {
        CHECK(e.achieved <= e.bound * (1 + 1e-12));
        CHECK(e.achieved_offset <= 2.0 * e.bound * (1 + 1e-12));
        CHECK(e.achieved_offset > 0.0);
    }
}

TEST_CASE("save/load round trip") {
    const char* path = "test_poly_tmp.txt";
    auto p = make_step_poly(0.125, 0.15);
    save_poly(p, path);
    auto q = load_poly(path);
    CHECK(q.degree() == p.degree());
    REQUIRE(q.coeffs.size() == p.coeffs.size());
    for (size_t i = 0; i < p.coeffs.size(); ++i) CHECK(q.coeffs[i] == p.coeffs[i]);
    REQUIRE(q.cert.size() == p.cert.size());
    CHECK(q.cert[0].bound == p.cert[0].bound);
    for (double x : {0.0, 0.3, 0.99}) CHECK(q(x) == p(x));
    std::remove(path);
}

TEST_CASE("corrupted polynomial file is rejected") {
    const char* path = "test_poly_bad.txt";
    {
        std::ofstream out(path);
        out << "entroq-poly v2\ngarbage\n";
    }
    CHECK_THROWS(load_poly(path));
    std::remove(path);
    CHECK_THROWS(load_poly("no_such_poly.txt"));
}

TEST_CASE("from_chebyshev_x enforces parity") {
    CHECK_THROWS(from_chebyshev_x({0.0, 0.5, 0.25}, Parity::odd));
    auto p = from_chebyshev_x({0.0, 0.5, 0.0, 0.25}, Parity::odd);
    CHECK(p(0.5) == doctest::Approx(0.5 * 0.5 + 0.25 * (4 * 0.125 - 3 * 0.5)).epsilon(1e-13));
}

TEST_CASE("eval_poly range checks") {
    auto p = make_step_poly(0.25, 0.2);
    CHECK_THROWS(eval_poly(p, 1.5));
    CHECK_NOTHROW(eval_poly(p, -1.0));
}

TEST_CASE("cache returns the same object") {
    PolyCache cache;
    const BoundedPoly& a = cache.step(0.25, 0.1);
    const BoundedPoly& b = cache.step(0.25, 0.1);
    CHECK(&a == &b);
    cache.clear();
}

TEST_CASE("degree scaling of the step family") {
    // degree times phi stays within a constant band once phi is small
    PolyCache cache;
    double ref = cache.step(1.0 / 64, 0.1).degree() / 64.0;
    for (int j : {7, 8}) {
        double phi = std::ldexp(1.0, -j);
        double norm = cache.step(phi, 0.1).degree() * phi;
        CHECK(norm / ref > 0.5);
        CHECK(norm / ref < 2.0);
    }
}
