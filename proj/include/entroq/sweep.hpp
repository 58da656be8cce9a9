// Experiment driver: seeded sweeps over (family, n, eps), CSV emission,
// log-log scaling fits on the query ledger, and the certification suites
// behind the certify subcommand.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "entroq/distribution.hpp"

namespace entroq {

struct SweepConfig {
    std::vector<Family> families;
    std::vector<int> n_values;
    std::vector<double> eps_values;
    int trials = 1;
    std::uint64_t seed0 = 0;
    double cost_constant = 1.0;
    bool folklore = false;   // also run the single-polynomial baseline
    bool exact_qae = false;  // disable sampling noise
};

struct SweepRow {
    std::string family;
    int n = 0;
    double eps = 0.0;
    std::uint64_t seed = 0;
    double estimate = 0.0;
    double exact = 0.0;
    double abs_err = 0.0;
    int success = 0;  // abs_err <= eps
    long long queries_total = 0;
    long long queries_folklore = 0;
    int m = 0;
    int skipped_levels = 0;
};

// Rows in canonical order: families, then n, then eps, then trial index.
// Seeds are seed0 + row index, so output is byte-identical given the config.
std::vector<SweepRow> run_sweep(const SweepConfig& cfg);

std::string sweep_csv(const std::vector<SweepRow>& rows);
void write_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path);

enum class SweepAxis { n, inv_eps };

struct ScalingFit {
    SweepAxis axis = SweepAxis::n;
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    bool log_correction = false;  // ledger divided by m^2 before fitting
};

// Least squares on log2(queries / m^2) vs log2(axis value), queries averaged
// per axis value across rows. Needs >= 4 distinct axis values.
ScalingFit fit_scaling(const std::vector<SweepRow>& rows, SweepAxis axis,
                       bool folklore_column = false);

struct CertifyReport {
    bool ok = true;
    std::string detail;  // names the first failing check with values
};

CertifyReport certify_polys();
CertifyReport certify_poly_file(const std::string& path);
CertifyReport certify_cascade();
CertifyReport certify_qae();
CertifyReport certify_reduction();

}  // namespace entroq
