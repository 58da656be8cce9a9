#include "entroq/sweep.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "entroq/amplitude.hpp"
#include "entroq/cascade.hpp"
#include "entroq/estimator.hpp"
#include "entroq/hard_instance.hpp"
#include "entroq/poly.hpp"

namespace entroq {

std::vector<SweepRow> run_sweep(const SweepConfig& cfg) {
    if (cfg.trials < 1) throw std::invalid_argument("sweep: trials must be >= 1");
    for (int n : cfg.n_values)
        if (n < 2) throw std::invalid_argument("sweep: n must be >= 2");
    for (double e : cfg.eps_values)
        if (!(e > 0.0 && e <= 1.0)) throw std::invalid_argument("sweep: eps outside (0,1]");
    if (cfg.families.empty() || cfg.n_values.empty() || cfg.eps_values.empty())
        throw std::invalid_argument("sweep: empty axis");

    EstimateOptions opt;
    opt.exact_qae = cfg.exact_qae;
    opt.cost_constant = cfg.cost_constant;

    std::vector<SweepRow> rows;
    std::uint64_t idx = 0;
    for (Family fam : cfg.families)
        for (int n : cfg.n_values)
            for (double eps : cfg.eps_values) {
                Distribution d = make_distribution(fam, n);
                EstimatorPlan plan = make_plan(d, eps, opt);
                FolklorePlan fplan;
                if (cfg.folklore) fplan = make_folklore_plan(d, eps, opt);
                size_t base = rows.size();
                rows.resize(base + cfg.trials);
#pragma omp parallel for schedule(static)
                for (int t = 0; t < cfg.trials; ++t) {
                    std::uint64_t seed = cfg.seed0 + idx + t;
                    EstimateReport rep = run_trial(plan, seed);
                    SweepRow row;
                    row.family = family_name(fam);
                    row.n = n;
                    row.eps = eps;
                    row.seed = seed;
                    row.estimate = rep.v;
                    row.exact = rep.exact_entropy;
                    row.abs_err = rep.abs_error;
                    row.success = rep.abs_error <= eps ? 1 : 0;
                    row.queries_total = rep.ledger.total;
                    row.m = rep.params.m;
                    row.skipped_levels = rep.skipped_levels();
                    if (cfg.folklore)
                        row.queries_folklore = run_folklore_trial(fplan, seed).ledger.total;
                    rows[base + t] = std::move(row);
                }
                idx += cfg.trials;
            }
    return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream out;
    out << "family,n,eps,seed,estimate,exact,abs_err,success,queries_total,queries_folklore,m,"
           "skipped_levels\n";
    char buf[320];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%s,%d,%.17g,%llu,%.17g,%.17g,%.17g,%d,%lld,%lld,%d,%d\n",
                      r.family.c_str(), r.n, r.eps, static_cast<unsigned long long>(r.seed),
                      r.estimate, r.exact, r.abs_err, r.success, r.queries_total,
                      r.queries_folklore, r.m, r.skipped_levels);
        out << buf;
    }
    return out.str();
}

void write_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("sweep: cannot write " + path);
    out << sweep_csv(rows);
}

ScalingFit fit_scaling(const std::vector<SweepRow>& rows, SweepAxis axis, bool folklore_column) {
    // mean corrected queries per axis value; trials are deterministic in cost
    // so the mean is over families, not noise
    std::map<double, std::pair<double, long long>> acc;  // axis -> (sum of q/m^2, count)
    for (const auto& r : rows) {
        double x = axis == SweepAxis::n ? r.n : 1.0 / r.eps;
        long long q = folklore_column ? r.queries_folklore : r.queries_total;
        if (q <= 0) continue;
        auto& a = acc[x];
        a.first += static_cast<double>(q) / (static_cast<double>(r.m) * r.m);
        a.second += 1;
    }
    if (acc.size() < 4) throw std::invalid_argument("fit_scaling: need >= 4 distinct axis values");
    std::vector<double> xs, ys;
    for (const auto& [x, a] : acc) {
        xs.push_back(std::log2(x));
        ys.push_back(std::log2(a.first / a.second));
    }
    double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
        syy += ys[i] * ys[i];
    }
    ScalingFit fit;
    fit.axis = axis;
    fit.log_correction = true;
    double den = n * sxx - sx * sx;
    fit.slope = (n * sxy - sx * sy) / den;
    fit.intercept = (sy - fit.slope * sx) / n;
    double ss_res = 0, mean_y = sy / n, ss_tot = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        double pred = fit.intercept + fit.slope * xs[i];
        ss_res += (ys[i] - pred) * (ys[i] - pred);
        ss_tot += (ys[i] - mean_y) * (ys[i] - mean_y);
    }
    fit.r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
    return fit;
}

namespace {

CertifyReport fail(const std::string& what) { return {false, what}; }

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

}  // namespace

CertifyReport certify_polys() {
    PolyCache& cache = global_poly_cache();
    {
        const BoundedPoly& p = cache.step(0.25, 0.1);
        if (!p.certified()) return fail("step(0.25,0.1): certificate violated");
        for (double x = 0.0; x <= 0.25; x += 0.01)
            if (p(x) > 0.1 + 1e-12) return fail("step(0.25,0.1): low clause at x=" + fmt(x));
        for (double x = 0.5; x <= 1.0; x += 0.01)
            if (p(x) < std::sqrt(1.0 - 0.01) - 1e-12)
                return fail("step(0.25,0.1): high clause at x=" + fmt(x));
    }
    for (int k = 1; k <= 4; ++k) {
        const BoundedPoly& s = cache.sk(k, 0.01);
        if (!s.certified()) return fail("S_" + std::to_string(k) + ": certificate violated");
    }
    {
        const BoundedPoly& s = cache.sk(1, 0.01);
        double want = 0.5 / std::sqrt(2.0);  // sqrt(log2 2)/(2 sqrt 2) at x=1
        if (std::abs(s(1.0) - want) > 0.01 + 1e-12)
            return fail("S_1(1): got " + fmt(s(1.0)) + " want " + fmt(want));
    }
    {
        const BoundedPoly& s = cache.sqrt_log(1.0 / 32.0, 0.005);
        if (!s.certified()) return fail("sqrt_log(1/32,0.005): certificate violated");
    }
    return {true, "polys: step clauses, S_k and sqrt-log certificates pass"};
}

CertifyReport certify_poly_file(const std::string& path) {
    BoundedPoly p;
    try {
        p = load_poly(path);
    } catch (const std::exception& e) {
        return fail(std::string("poly file: ") + e.what());
    }
    double sup = measure_sup(p);
    if (sup > 1.0 + 1e-9) return fail("poly file: sup bound violated, sup=" + fmt(sup));
    if (!p.certified()) return fail("poly file: stored certificate violated");
    return {true, "poly file: sup and certificates pass, degree " + std::to_string(p.degree())};
}

CertifyReport certify_cascade() {
    PolyCache& cache = global_poly_cache();
    const int m = 12;
    for (double eps : {0.1, 0.05}) {
        CascadeConfig cfg = CascadeConfig::make(m, eps, cache, 1);
        for (int j = 1; j <= m; ++j) {
            double phi = cfg.phi(j);
            for (int i = 0; i < 1000; ++i) {
                double x = phi * i / 999.0;
                double b = beta_coefficients(cfg, x, j).first;
                if (b > eps + 1e-12)
                    return fail("cascade eps=" + fmt(eps) + ": beta > eps at level " +
                                std::to_string(j) + " x=" + fmt(x));
            }
            if (2.0 * phi <= 1.0) {
                for (int i = 0; i < 1000; ++i) {
                    double x = 2.0 * phi + (1.0 - 2.0 * phi) * i / 999.0;
                    double bp = beta_coefficients(cfg, x, j).second;
                    if (bp > eps + 1e-12)
                        return fail("cascade eps=" + fmt(eps) + ": beta' > eps at level " +
                                    std::to_string(j) + " x=" + fmt(x));
                }
            }
        }
        // concentration on a log-spaced grid over [phi_m, 1]
        for (int i = 0; i < 1000; ++i) {
            double x = std::exp2(-static_cast<double>(m) * (999 - i) / 999.0);
            ConcentrationCheck cc = check_concentration(cfg, x, 4.0);
            if (!cc.ok)
                return fail("cascade eps=" + fmt(eps) + ": concentration " + fmt(cc.mass) +
                            " at x=" + fmt(x) + " j*=" + std::to_string(cc.j_star));
        }
    }
    return {true, "cascade: threshold clauses and concentration pass for eps in {0.1, 0.05}"};
}

CertifyReport certify_qae() {
    for (int M : {16, 64, 256}) {
        for (int i = 0; i < 50; ++i) {
            double a = static_cast<double>(i) / 49.0;
            double band = 2.0 * M_PI * std::sqrt(a * (1.0 - a)) / M + (M_PI / M) * (M_PI / M);
            auto dist = qae_distribution(a, M);
            double mass = 0.0;
            for (size_t j = 0; j < dist.size(); ++j)
                if (std::abs(qae_grid_value(static_cast<int>(j), M) - a) <= band) mass += dist[j];
            if (mass < 8.0 / (M_PI * M_PI) - 1e-9)
                return fail("qae M=" + std::to_string(M) + " a=" + fmt(a) +
                            ": in-band mass " + fmt(mass));
        }
    }
    return {true, "qae: 8/pi^2 in-band mass holds on the 50-point grid"};
}

CertifyReport certify_reduction() {
    // worked instance: 4 strings of weight 2 out of 8 bits
    std::vector<std::vector<std::uint8_t>> b(4, std::vector<std::uint8_t>(8, 0));
    for (int i = 0; i < 4; ++i) b[i][i] = b[i][i + 4] = 1;
    auto rel = entropy_relation_check(build_hard_instance(std::move(b)));
    if (std::abs(rel.lhs - 2.0) > 1e-12 || rel.max_dev > 1e-12)
        return fail("reduction worked instance: lhs=" + fmt(rel.lhs) +
                    " dev=" + fmt(rel.max_dev));
    double worst = 0.0;
    for (int it = 0; it < 100; ++it) {
        int n = 2 + it % 63;
        int k = 2 + (7 * it) % 63;
        double t = 0.1 + 0.8 * ((it * 37) % 100) / 100.0 * k;
        HardInstance inst = build_hard_instance(n, k, t, 9000 + it);
        if (inst.R == static_cast<long long>(n) * k) continue;  // degenerate t/k = 1
        double dev = entropy_relation_check(inst).max_dev;
        if (dev > worst) worst = dev;
    }
    if (worst > 1e-10) return fail("reduction sweep: max_dev " + fmt(worst));
    return {true, "reduction: identity holds, max_dev " + fmt(worst)};
}

}  // namespace entroq
