#include "entroq/poly.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "entroq/chebyshev.hpp"

namespace entroq {

namespace {

constexpr int kMinFit = 8;
constexpr int kMaxFit = 1 << 21;

// Gaussian rounding of max(a, c) with transition width s: exceeds the hard
// max by at most ~0.4 s at the corner and exponentially less away from it,
// so the clamp bias decays fast inside the certified interval. Used to keep
// targets away from their singularities outside that interval.
double smooth_floor(double a, double c, double s) {
    double y = (a - c) / s;
    if (y > 8.0) return a;
    if (y < -8.0) return c;
    double Phi = 0.5 * std::erfc(-y / std::sqrt(2.0));
    double phi = std::exp(-0.5 * y * y) / std::sqrt(2.0 * M_PI);
    return c + s * (y * Phi + phi);
}

// Width so the rounding bias at distance gap from the floor stays far below
// eta: at 4.5 widths out the Gaussian tail is ~2e-6 of the width, which
// covers every budget down to 1e-6 without narrowing the transition.
double floor_width(double gap, double eta) {
    return gap / std::max(4.5, std::sqrt(2.0 * std::log(1.0 / eta)));
}

// Smallest z with 0.5 erfc(z) <= tail.
double erfc_tail_point(double tail) {
    double lo = 0.0, hi = 12.0;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (0.5 * std::erfc(mid) <= tail)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

struct IntervalSpec {
    double lo_x, hi_x;
    std::string target;
    std::function<double(double)> f;  // reference value at x; unused for zero/one
    double bound;
};

struct CertMeasure {
    double sup = 0.0;
    std::vector<double> achieved;
    bool pass(const std::vector<IntervalSpec>& iv, double factor) const {
        for (size_t i = 0; i < iv.size(); ++i)
            if (achieved[i] > factor * iv[i].bound) return false;
        return true;
    }
};

double deviation(const IntervalSpec& iv, double value, double x) {
    if (iv.target == "zero") return std::abs(value);
    if (iv.target == "one") return std::max(0.0, 1.0 - value);
    return std::abs(value - iv.f(x));
}

// Measure sup |P| and per-interval deviations of the u-series c on a
// Chebyshev grid of size N (Lobatto or Gauss placement). Deviations are
// reported for P divided by rescale = max(1, sup), matching the final
// renormalized polynomial.
CertMeasure measure(const std::vector<double>& c, const std::vector<IntervalSpec>& iv,
                    int N, bool gauss) {
    std::vector<double> vals =
        gauss ? cheb::grid_values_gauss(c, N) : cheb::grid_values_lobatto(c, N);
    std::vector<double> us(vals.size());
    for (size_t j = 0; j < vals.size(); ++j) {
        double t = gauss ? std::cos(M_PI * (j + 0.5) / N) : std::cos(M_PI * j / N);
        us[j] = 0.5 * (t + 1.0);
    }
    CertMeasure out;
    for (double v : vals) out.sup = std::max(out.sup, std::abs(v));
    // interval endpoints are rarely grid points; evaluate them directly
    std::vector<std::pair<double, double>> extra;  // (u, value)
    for (const auto& spec : iv)
        for (double x : {spec.lo_x, spec.hi_x}) {
            double u = x * x;
            double v = cheb::clenshaw(c, 2.0 * u - 1.0);
            out.sup = std::max(out.sup, std::abs(v));
            extra.emplace_back(u, v);
        }
    double rescale = std::max(1.0, out.sup);
    out.achieved.assign(iv.size(), 0.0);
    for (size_t i = 0; i < iv.size(); ++i) {
        const auto& spec = iv[i];
        double ulo = spec.lo_x * spec.lo_x, uhi = spec.hi_x * spec.hi_x;
        double worst = 0.0;
        for (size_t j = 0; j < us.size(); ++j)
            if (us[j] >= ulo && us[j] <= uhi)
                worst = std::max(worst, deviation(spec, vals[j] / rescale, std::sqrt(us[j])));
        for (const auto& [u, v] : extra)
            if (u >= ulo - 1e-300 && u <= uhi)
                worst = std::max(worst, deviation(spec, v / rescale, std::sqrt(u)));
        out.achieved[i] = worst;
    }
    return out;
}

std::vector<double> fit_target(const std::function<double(double)>& g_u, int N) {
    auto vals = cheb::sample_lobatto([&](double t) { return g_u(0.5 * (t + 1.0)); }, N);
    return cheb::fit_lobatto(vals);
}

// Lobatto-grid certificate at >= 10x oversampling, then an offset (Gauss)
// grid within 2x of each bound.
bool accept(const std::vector<double>& c, const std::vector<IntervalSpec>& iv,
            CertMeasure* lob_out, CertMeasure* gau_out) {
    int Nc = cheb::next_nice(10 * static_cast<int>(c.size()));
    CertMeasure lob = measure(c, iv, Nc, false);
    if (lob_out) *lob_out = lob;
    if (!lob.pass(iv, 1.0)) return false;
    CertMeasure gau = measure(c, iv, Nc, true);
    if (gau_out) *gau_out = gau;
    return gau.pass(iv, 2.0);
}

BoundedPoly build_even_poly(const std::function<double(double)>& g_u,
                            const std::vector<IntervalSpec>& iv) {
    std::map<int, bool> memo;
    CertMeasure last;
    auto pass1 = [&](int N) {
        auto it = memo.find(N);
        if (it != memo.end()) return it->second;
        auto c = fit_target(g_u, N);
        bool ok = accept(c, iv, &last, nullptr);
        memo.emplace(N, ok);
        return ok;
    };
    auto nxt = [](int N) { return cheb::next_nice(N + 1); };
    // "stable" pass: the next two ladder sizes must pass as well, so a lucky
    // resonance at one size does not get reported as the minimal degree
    auto stable = [&](int N) { return pass1(N) && pass1(nxt(N)) && pass1(nxt(nxt(N))); };

    int N_fail = 0, N_pass = -1;
    for (int N = kMinFit; N <= kMaxFit; N *= 2) {
        if (stable(N)) {
            N_pass = N;
            break;
        }
        N_fail = N;
    }
    if (N_pass < 0) {
        double worst = 0.0;
        for (double a : last.achieved) worst = std::max(worst, a);
        throw PolyBuildError("polynomial certification failed at degree cap", worst, 2 * kMaxFit);
    }
    // shrink to the smallest stably passing "nice" size between the brackets
    std::vector<int> ladder;
    for (int v = cheb::next_nice(N_fail + 1); v < N_pass; v = cheb::next_nice(v + 1))
        ladder.push_back(v);
    int lo = 0, hi = static_cast<int>(ladder.size());
    while (lo < hi) {
        int mid = (lo + hi) / 2;
        if (stable(ladder[mid]))
            hi = mid;
        else
            lo = mid + 1;
    }
    int N_final = (lo < static_cast<int>(ladder.size())) ? ladder[lo] : N_pass;

    auto c = fit_target(g_u, N_final);
    CertMeasure lob, gau;
    if (!accept(c, iv, &lob, &gau))
        throw PolyBuildError("certification lost while shrinking degree", 0.0, 2 * N_final);
    if (lob.sup > 1.0) {
        double rescale = lob.sup * (1.0 + 1e-14);
        for (double& v : c) v /= rescale;
        lob.sup /= rescale;
    }
    BoundedPoly p;
    p.basis = PolyBasis::cheb_x2;
    p.parity = Parity::even;
    p.coeffs = std::move(c);
    p.sup_certified = lob.sup;
    for (size_t i = 0; i < iv.size(); ++i)
        p.cert.push_back({iv[i].lo_x, iv[i].hi_x, iv[i].target, iv[i].bound, lob.achieved[i],
                          gau.achieved[i]});
    return p;
}

}  // namespace

int BoundedPoly::degree() const {
    if (coeffs.empty()) return 0;
    int d = static_cast<int>(coeffs.size()) - 1;
    return basis == PolyBasis::cheb_x2 ? 2 * d : d;
}

double BoundedPoly::operator()(double x) const {
    if (basis == PolyBasis::cheb_x) return cheb::clenshaw(coeffs, x);
    double t = 2.0 * x * x - 1.0;
    return cheb::clenshaw(coeffs, std::clamp(t, -1.0, 1.0));
}

bool BoundedPoly::certified(double slack) const {
    if (sup_certified > 1.0 + slack) return false;
    for (const auto& e : cert) {
        if (e.achieved > e.bound * (1.0 + 1e-12)) return false;
        if (e.achieved_offset > 2.0 * e.bound * (1.0 + 1e-12)) return false;
    }
    return true;
}

double eval_poly(const BoundedPoly& p, double x) {
    if (!(x >= -1.0 && x <= 1.0)) throw std::invalid_argument("eval_poly: x outside [-1,1]");
    return p(x);
}

BoundedPoly approx_sqrt_log(double beta, double eta) {
    if (!(beta > 0.0 && beta <= 0.5)) throw std::invalid_argument("approx_sqrt_log: beta");
    if (!(eta > 0.0 && eta <= 0.5)) throw std::invalid_argument("approx_sqrt_log: eta");
    const double L = std::log2(1.0 / beta);
    const double B = beta * beta;
    const double z_hi = 2.0 * std::log2(1.0 / (1.0 - beta + 1e-300));
    const double su = floor_width(0.5 * B, eta);
    const double sz = floor_width(0.5 * z_hi, eta);
    auto g_u = [=](double u) {
        double uc = smooth_floor(u, 0.5 * B, su);
        double z = std::log2(1.0 / uc);
        double zc = smooth_floor(z, 0.5 * z_hi, sz);
        return std::sqrt(zc) / (2.0 * std::sqrt(2.0 * L));
    };
    auto target = [=](double x) { return std::sqrt(std::log2(1.0 / x)) / (2.0 * std::sqrt(L)); };
    return build_even_poly(g_u, {{beta, 1.0 - beta, "sqrt-log", target, eta}});
}

BoundedPoly make_Sk(int k, double eta) {
    if (k < 1 || k > 60) throw std::invalid_argument("make_Sk: level out of range");
    if (!(eta > 0.0 && eta <= 0.5)) throw std::invalid_argument("make_Sk: eta");
    const double phi_k = std::ldexp(1.0, -k);
    const double U0 = phi_k * phi_k;
    const double norm = 2.0 * std::sqrt(k + 1.0);
    const double su = floor_width(0.5 * U0, eta);
    auto g_u = [=](double u) {
        double uc = smooth_floor(u, 0.5 * U0, su);
        return std::sqrt(1.0 + 0.5 * std::log2(1.0 / uc)) / norm;
    };
    auto target = [=](double x) { return std::sqrt(std::log2(2.0 / x)) / norm; };
    return build_even_poly(g_u, {{phi_k, 1.0, "sqrt-log2", target, eta}});
}

BoundedPoly make_step_poly(double phi, double eps) {
    if (!(phi > 0.0 && phi < 1.0)) throw std::invalid_argument("make_step_poly: phi");
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("make_step_poly: eps");
    const double A = 0.45 * eps * eps;
    const double tau = A / 3.0;
    const double zs = erfc_tail_point(A / 3.0);
    const double w = 0.5 * phi / zs;
    auto g_u = [=](double u) {
        return tau + (1.0 - 2.0 * tau) * 0.5 * (1.0 + std::erf((std::sqrt(u) - 1.5 * phi) / w));
    };
    // 1 - sqrt(1-eps^2), written to stay accurate for small eps
    const double hi_bound = eps * eps / (1.0 + std::sqrt(1.0 - eps * eps));
    std::vector<IntervalSpec> iv = {{0.0, phi, "zero", nullptr, eps}};
    if (2.0 * phi <= 1.0) iv.push_back({2.0 * phi, 1.0, "one", nullptr, hi_bound});
    return build_even_poly(g_u, iv);
}

BoundedPoly from_chebyshev_x(std::vector<double> coeffs, Parity parity) {
    for (size_t j = 0; j < coeffs.size(); ++j) {
        bool odd_index = (j % 2) == 1;
        bool allowed = (parity == Parity::odd) == odd_index;
        if (!allowed && std::abs(coeffs[j]) > 1e-15)
            throw std::invalid_argument("from_chebyshev_x: coefficient violates declared parity");
    }
    BoundedPoly p;
    p.basis = PolyBasis::cheb_x;
    p.parity = parity;
    p.coeffs = std::move(coeffs);
    p.sup_certified = measure_sup(p);
    return p;
}

double measure_sup(const BoundedPoly& p) {
    int N = cheb::next_nice(std::max(16, 10 * p.degree()));
    double sup = 0.0;
    if (p.basis == PolyBasis::cheb_x) {
        for (double v : cheb::grid_values_lobatto(p.coeffs, N)) sup = std::max(sup, std::abs(v));
    } else {
        for (double v : cheb::grid_values_lobatto(p.coeffs, N)) sup = std::max(sup, std::abs(v));
        sup = std::max(sup, std::abs(p(0.0)));
    }
    return sup;
}

void save_poly(const BoundedPoly& p, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write polynomial file: " + path);
    out << "entroq-poly v1\n";
    out << "basis " << (p.basis == PolyBasis::cheb_x2 ? "cheb_x2" : "cheb_x") << "\n";
    out << "parity " << (p.parity == Parity::even ? "even" : "odd") << "\n";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", p.sup_certified);
    out << "sup " << buf << "\n";
    out << "coeffs " << p.coeffs.size() << "\n";
    for (double c : p.coeffs) {
        std::snprintf(buf, sizeof buf, "%.17g", c);
        out << buf << "\n";
    }
    out << "certs " << p.cert.size() << "\n";
    for (const auto& e : p.cert) {
        std::ostringstream line;
        auto put = [&](double v) {
            std::snprintf(buf, sizeof buf, "%.17g", v);
            line << " " << buf;
        };
        line << e.target;
        put(e.lo);
        put(e.hi);
        put(e.bound);
        put(e.achieved);
        put(e.achieved_offset);
        out << line.str() << "\n";
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

BoundedPoly load_poly(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open polynomial file: " + path);
    auto fail = [&](const std::string& why) -> std::runtime_error {
        return std::runtime_error("bad polynomial file " + path + ": " + why);
    };
    std::string tag, word;
    std::getline(in, tag);
    if (tag != "entroq-poly v1") throw fail("unknown header");
    BoundedPoly p;
    in >> word;
    if (word != "basis") throw fail("expected basis");
    in >> word;
    if (word == "cheb_x2")
        p.basis = PolyBasis::cheb_x2;
    else if (word == "cheb_x")
        p.basis = PolyBasis::cheb_x;
    else
        throw fail("unknown basis");
    in >> word;
    if (word != "parity") throw fail("expected parity");
    in >> word;
    if (word == "even")
        p.parity = Parity::even;
    else if (word == "odd")
        p.parity = Parity::odd;
    else
        throw fail("unknown parity");
    in >> word >> p.sup_certified;
    if (word != "sup") throw fail("expected sup");
    size_t nc = 0;
    in >> word >> nc;
    if (word != "coeffs") throw fail("expected coeffs");
    p.coeffs.resize(nc);
    for (double& c : p.coeffs)
        if (!(in >> c)) throw fail("truncated coefficients");
    size_t ne = 0;
    in >> word >> ne;
    if (word != "certs") throw fail("expected certs");
    p.cert.resize(ne);
    for (auto& e : p.cert)
        if (!(in >> e.target >> e.lo >> e.hi >> e.bound >> e.achieved >> e.achieved_offset))
            throw fail("truncated certificate");
    return p;
}

namespace {
std::string cache_key(const char* kind, double a, double b) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%s:%a:%a", kind, a, b);
    return buf;
}
}  // namespace

const BoundedPoly& PolyCache::step(double phi, double eps) {
    std::lock_guard<std::mutex> lock(mu_);
    auto key = cache_key("step", phi, eps);
    auto it = map_.find(key);
    if (it == map_.end()) it = map_.emplace(key, make_step_poly(phi, eps)).first;
    return it->second;
}

const BoundedPoly& PolyCache::sk(int k, double eta) {
    std::lock_guard<std::mutex> lock(mu_);
    auto key = cache_key("sk", static_cast<double>(k), eta);
    auto it = map_.find(key);
    if (it == map_.end()) it = map_.emplace(key, make_Sk(k, eta)).first;
    return it->second;
}

const BoundedPoly& PolyCache::sqrt_log(double beta, double eta) {
    std::lock_guard<std::mutex> lock(mu_);
    auto key = cache_key("slog", beta, eta);
    auto it = map_.find(key);
    if (it == map_.end()) it = map_.emplace(key, approx_sqrt_log(beta, eta)).first;
    return it->second;
}

void PolyCache::clear() {
    std::lock_guard<std::mutex> lock(mu_);
    map_.clear();
}

PolyCache& global_poly_cache() {
    static PolyCache cache;
    return cache;
}

}  // namespace entroq
