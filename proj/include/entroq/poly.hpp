// Bounded, parity-constrained polynomials with per-interval accuracy
// certificates: the sqrt-log approximants and the threshold (step)
// polynomials that drive the singular value cascade.
//
// Even targets are built in the squared variable u = x^2, expanded in
// T_j(2u - 1). That places the x = 0 singularity at a Chebyshev endpoint,
// where node clustering buys a quadratic resolution gain, so step degrees
// come out ~ (1/phi) log(1/eps) instead of 1/phi^2.

#pragma once

#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

namespace entroq {

enum class PolyBasis { cheb_x, cheb_x2 };
enum class Parity { even, odd };

// Accuracy certificate over an interval in x. target names the reference
// function ("zero", "one", "sqrt-log", "sqrt-log2"); achieved is the measured
// sup deviation on the construction grid, achieved_offset the same on an
// independently placed (Gauss) grid.
struct CertEntry {
    double lo = 0.0;
    double hi = 0.0;
    std::string target;
    double bound = 0.0;
    double achieved = 0.0;
    double achieved_offset = 0.0;
};

struct BoundedPoly {
    PolyBasis basis = PolyBasis::cheb_x2;
    Parity parity = Parity::even;
    std::vector<double> coeffs;       // basis coefficients
    std::vector<CertEntry> cert;
    double sup_certified = 0.0;       // measured sup |P| over [-1,1]

    // Degree in x. For cheb_x2 each T_j(2x^2-1) contributes degree 2j.
    int degree() const;

    double operator()(double x) const;

    // |P| <= 1 within slack and every cert entry within its bound.
    bool certified(double slack = 1e-9) const;
};

// Construction could not meet the certificates within the degree cap.
struct PolyBuildError : std::runtime_error {
    double achieved_error;
    int degree_tried;
    PolyBuildError(const std::string& what, double achieved, int degree)
        : std::runtime_error(what), achieved_error(achieved), degree_tried(degree) {}
};

// Even polynomial with |P(x) - sqrt(log(1/x)) / (2 sqrt(log(1/beta)))| <= eta
// on [beta, 1-beta]. The ratio is log-base invariant; base 2 is used
// internally like everywhere else.
BoundedPoly approx_sqrt_log(double beta, double eta);

// Even polynomial with |S_k(x) - sqrt(log2(2/x)) / (2 sqrt(k+1))| <= eta on
// [2^-k, 1]. Note sqrt(log2(1/phi_{k+1})) = sqrt(k+1).
BoundedPoly make_Sk(int k, double eta);

// Even step response: b in [0,1], b <= eps on [0, phi], b >= sqrt(1-eps^2)
// on [2 phi, 1] (clipped to {1} when 2 phi = 1, dropped when 2 phi > 1).
BoundedPoly make_step_poly(double phi, double eps);

// Range-checked evaluation, |x| <= 1.
double eval_poly(const BoundedPoly& p, double x);

// Wrap explicit T_k(x) coefficients; validates the parity pattern and
// measures the sup norm on a dense grid.
BoundedPoly from_chebyshev_x(std::vector<double> coeffs, Parity parity);

// Re-measure sup |P| on a fresh grid of >= 10*degree points (plus endpoints).
double measure_sup(const BoundedPoly& p);

// Plain-text round trip, 17 significant digits.
void save_poly(const BoundedPoly& p, const std::string& path);
BoundedPoly load_poly(const std::string& path);

// Memoizes constructions keyed by exact parameters; the cascade re-requests
// the same step polynomials constantly.
class PolyCache {
  public:
    const BoundedPoly& step(double phi, double eps);
    const BoundedPoly& sk(int k, double eta);
    const BoundedPoly& sqrt_log(double beta, double eta);
    void clear();

  private:
    std::map<std::string, BoundedPoly> map_;
    std::mutex mu_;
};

PolyCache& global_poly_cache();

}  // namespace entroq
