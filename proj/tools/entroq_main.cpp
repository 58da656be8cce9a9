// Command-line front end: single runs, sweeps with CSV output, scaling fits,
// certification suites, and hard-instance construction.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "entroq/distribution.hpp"
#include "entroq/estimator.hpp"
#include "entroq/hard_instance.hpp"
#include "entroq/oracle.hpp"
#include "entroq/sweep.hpp"

using namespace entroq;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvariant = 1;
constexpr int kExitConfig = 2;

std::vector<Family> parse_families(const std::vector<std::string>& names) {
    std::vector<Family> out;
    for (const auto& s : names) out.push_back(family_from_name(s));
    return out;
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + out_path);
    out << text;
}

std::vector<SweepRow> read_sweep_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("family,", 0) != 0)
        throw std::runtime_error("not a sweep CSV: " + path);
    std::vector<SweepRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        SweepRow r;
        char fam[64];
        unsigned long long seed = 0;
        long long qt = 0, qf = 0;
        if (std::sscanf(line.c_str(), "%63[^,],%d,%lf,%llu,%lf,%lf,%lf,%d,%lld,%lld,%d,%d",
                        fam, &r.n, &r.eps, &seed, &r.estimate, &r.exact, &r.abs_err, &r.success,
                        &qt, &qf, &r.m, &r.skipped_levels) != 12)
            throw std::runtime_error("bad CSV row: " + line);
        r.family = fam;
        r.seed = seed;
        r.queries_total = qt;
        r.queries_folklore = qf;
        rows.push_back(std::move(r));
    }
    return rows;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"desk-scale entropy estimation: runs, sweeps, fits, certification"};
    app.require_subcommand(1);
    app.set_config("--config")->description("flat key=value config file; flags override");

    // shared options, registered per subcommand where meaningful
    std::vector<std::string> dists = {"uniform"};
    std::vector<int> ns = {64};
    std::vector<double> epss = {0.25};
    int trials = 1;
    std::uint64_t seed = 0;
    double cost_constant = 1.0;
    std::string out_path;
    bool folklore = false, exact_qae = false;

    auto* run = app.add_subcommand("run", "single estimate on one distribution");
    run->add_option("--dist", dists, "family name or explicit:<path>")->delimiter(',');
    run->add_option("--n", ns, "support size")->delimiter(',');
    run->add_option("--eps", epss, "target additive error")->delimiter(',');
    run->add_option("--seed", seed, "RNG seed");
    run->add_option("--cost-constant", cost_constant, "ledger bookkeeping constant c");
    run->add_option("--out", out_path, "write report here instead of stdout");
    run->add_flag("--folklore", folklore, "use the single-polynomial baseline");
    run->add_flag("--exact-qae", exact_qae, "disable sampling noise");

    auto* sweep = app.add_subcommand("sweep", "grid of (family, n, eps) x trials, CSV out");
    sweep->add_option("--dist", dists, "family names")->delimiter(',');
    sweep->add_option("--n", ns, "support sizes")->delimiter(',');
    sweep->add_option("--eps", epss, "target errors")->delimiter(',');
    sweep->add_option("--trials", trials, "trials per cell");
    sweep->add_option("--seed", seed, "base seed; row seeds are seed+index");
    sweep->add_option("--cost-constant", cost_constant, "ledger bookkeeping constant c");
    sweep->add_option("--out", out_path, "CSV path, stdout if omitted");
    sweep->add_flag("--folklore", folklore, "also charge the baseline per row");
    sweep->add_flag("--exact-qae", exact_qae, "disable sampling noise");

    std::string fit_csv, fit_axis = "n";
    auto* fit = app.add_subcommand("fit", "log-log scaling fit over a sweep CSV");
    fit->add_option("csv", fit_csv, "sweep CSV path")->required();
    fit->add_option("--axis", fit_axis, "n or inv_eps");
    fit->add_flag("--folklore", folklore, "fit the folklore column");

    std::string what, poly_file;
    auto* certify = app.add_subcommand("certify", "run a module invariant suite");
    certify->add_option("what", what, "polys | cascade | qae | reduction");
    certify->add_option("--poly-file", poly_file, "certify a saved polynomial file instead");

    int hi_n = 16, hi_k = 32;
    double hi_t = 4.0;
    std::string bits_path;
    auto* hard = app.add_subcommand("hard-instance", "build and check a lower-bound instance");
    hard->add_option("--n", hi_n, "number of bit strings");
    hard->add_option("--k", hi_k, "bits per string");
    hard->add_option("--t", hi_t, "target weight per string, R = round(t n)");
    hard->add_option("--seed", seed, "RNG seed");
    hard->add_option("--bits", bits_path, "read bit matrix from file instead");
    hard->add_option("--out", out_path, "write report here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (run->parsed()) {
            std::ostringstream report;
            for (const std::string& dn : dists)
                for (int n : ns)
                    for (double eps : epss) {
                        Distribution d;
                        if (dn.rfind("explicit:", 0) == 0)
                            d = load_distribution(dn.substr(9));
                        else
                            d = make_distribution(family_from_name(dn), n);
                        OracleModel oracle(d);
                        EstimateOptions opt;
                        opt.exact_qae = exact_qae;
                        opt.cost_constant = cost_constant;
                        EstimateReport rep = folklore
                                                 ? folklore_estimate(oracle, eps, seed, opt)
                                                 : estimate_entropy(oracle, eps, seed, opt);
                        report << "dist=" << dn << "\n" << rep.to_text();
                        report << oracle.ledger.to_csv();
                    }
            emit(report.str(), out_path);
        } else if (sweep->parsed()) {
            SweepConfig cfg;
            cfg.families = parse_families(dists);
            cfg.n_values = ns;
            cfg.eps_values = epss;
            cfg.trials = trials;
            cfg.seed0 = seed;
            cfg.cost_constant = cost_constant;
            cfg.folklore = folklore;
            cfg.exact_qae = exact_qae;
            emit(sweep_csv(run_sweep(cfg)), out_path);
        } else if (fit->parsed()) {
            SweepAxis axis;
            if (fit_axis == "n")
                axis = SweepAxis::n;
            else if (fit_axis == "inv_eps")
                axis = SweepAxis::inv_eps;
            else
                throw std::runtime_error("axis must be n or inv_eps");
            ScalingFit f = fit_scaling(read_sweep_csv(fit_csv), axis, folklore);
            std::printf("axis=%s slope=%.6f intercept=%.6f r2=%.6f log_correction=m^2\n",
                        fit_axis.c_str(), f.slope, f.intercept, f.r2);
        } else if (certify->parsed()) {
            CertifyReport rep;
            if (!poly_file.empty())
                rep = certify_poly_file(poly_file);
            else if (what == "polys")
                rep = certify_polys();
            else if (what == "cascade")
                rep = certify_cascade();
            else if (what == "qae")
                rep = certify_qae();
            else if (what == "reduction")
                rep = certify_reduction();
            else
                throw std::runtime_error("certify target must be polys|cascade|qae|reduction");
            std::printf("%s: %s\n", rep.ok ? "PASS" : "FAIL", rep.detail.c_str());
            if (!rep.ok) return kExitInvariant;
        } else if (hard->parsed()) {
            HardInstance inst = bits_path.empty()
                                    ? build_hard_instance(hi_n, hi_k, hi_t, seed)
                                    : load_hard_instance(bits_path);
            EntropyRelation rel = entropy_relation_check(inst);
            std::ostringstream report;
            report << "n=" << inst.n << " k=" << inst.k << " R=" << inst.R << " t=" << inst.t()
                   << "\nH(p)=" << rel.lhs << " (k/t)(H(q)-B(t/k))=" << rel.rhs
                   << " dev=" << rel.max_dev << "\n";
            emit(report.str(), out_path);
            if (rel.max_dev > 1e-10) return kExitInvariant;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitConfig;
    }
    return kExitOk;
}
