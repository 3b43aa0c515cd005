#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "gml/check.hpp"

namespace gml {

// Piecewise-linear cutoff: 1 up to x0 = sqrt(2N) gamma_{i/N}, slope -s on
// [x0, x1], 0 beyond x1 = x0 + 1/s, where s = sqrt(N/2) rho_sc(gamma_{i/N}) / m.
struct CutoffEta {
    int N = 0, i = 0;
    double m = 1.0;
    double gamma = 0.0;
    double x0 = 0.0, x1 = 0.0;
    double slope = 0.0;  // s > 0; eta' = -s on (x0, x1)

    CutoffEta(int i, int N, double m);
    double operator()(double x) const;
    double derivative(double x) const;
};

double eval_eta(double x, int i, int N, double m);

// alpha = int_{-inf}^{e} phi_{N-1}^2 with e = sqrt(2N) gamma_{i/N}; the literal
// reading e = gamma_{i/N} is available for comparison.
double alpha_constant(int i, int N, bool literal_endpoint = false);

struct AjkTable {
    int N = 0, i = 0;
    double m = 1.0;
    int j0 = 0, j1 = 0, k0 = 0, k1 = 0;  // inclusive ranges
    std::vector<double> direct;          // row-major (j - j0) * (k1 - k0 + 1) + (k - k0)
    std::vector<double> wronskian;       // NaN on j == k
    double gate_change = 0.0;            // max change of the direct values under node doubling
    double max_disagreement = 0.0;       // max |direct - wronskian|
    double max_envelope = 0.0;           // max |a_{j,k}| |j - k|

    int cols() const { return k1 - k0 + 1; }
    double at(int j, int k) const { return direct[static_cast<std::size_t>(j - j0) * cols() + (k - k0)]; }
    double wr(int j, int k) const { return wronskian[static_cast<std::size_t>(j - j0) * cols() + (k - k0)]; }
    bool contains(int j, int k) const { return j >= j0 && j <= j1 && k >= k0 && k <= k1; }
};

// a_{j,k} = int eta phi_j phi_k by Gauss-Legendre on (-inf, x1] (panels broken
// at x0 and x1), and by the boundary form
//   a_{j,k} = -(1/(2(j-k))) int eta' (phi_j phi_k' - phi_j' phi_k).
AjkTable compute_ajk(int i, int N, double m, int j0, int j1, int k0, int k1);

double first_moment(int i, int N, double m, bool literal_endpoint = false);

// The three sums of the variance expression over a table, restricted to |j-k| <= D.
struct DivTerms {
    double S1 = 0.0;  // sum_{j<N<=k} a^2
    double S2 = 0.0;  // sum_{j<N-1<=k} a^2
    double S3 = 0.0;  // sum_{1<=j<N<=k} sqrt(j/k) a_{j,k} a_{j-1,k-1}
    double corrected() const { return S1 + S2 - 2.0 * S3; }
    double verbatim() const { return S1 + S2 - S3; }
};
DivTerms div_terms(const AjkTable& t, int D);

struct VarianceFormula {
    double value = 0.0;         // corrected expression, cutoff D
    double verbatim = 0.0;      // as displayed, cutoff D
    double half_cutoff = 0.0;   // corrected expression at D/2
    double tail_estimate = 0.0; // |value - half_cutoff|
    int D = 0;
    DivTerms terms;
};

// The tail estimate is the shell difference V(D) - V(D/2).  Throws
// std::runtime_error when it exceeds 1% of the value; the (i, N, m) form
// doubles the initial cutoff up to three times before giving up.
VarianceFormula variance_formula(int i, int N, double m, int D = 0);
VarianceFormula variance_formula(const AjkTable& t, int D);

enum class MinorBlock { NN, N1N1, N1N, NN1 };

struct BlockValue {
    double value = 0.0;
    double doubled = 0.0;  // NN1 only: value with truncation 2J
    bool stable = true;    // NN1 only: |value - doubled| <= 1e-4
};

// J is the NN1 truncation (default 100N); NN1 sums the series against a smooth
// window and compares with truncation 2J.
BlockValue eval_minor_block(MinorBlock which, int N, double x, double y, int J = 0);

struct MinorVarianceConfig {
    int N = 200;
    double i_frac = 0.5;
    double m = 8.0;
    long trials = 20000;
    int D = 0;  // initial |j-k| cutoff, 0 = max(200, 20m)
    bool literal_endpoint = false;
    double rel_tol = 0.10;
    double k_sigma = 3.0;
    std::uint64_t seed = 7;
};

// Closed forms (first moment, variance expression) against Monte Carlo on
// the two-row minor process; a_{j,k} dual-method and envelope checks.
SuiteResult verify_minor_variance(const MinorVarianceConfig& c);

// Per-trial statistic S = sum eta(lambda) - sum eta(lambda'), so that
// (1/m) int_0^m F = S - alpha.  Also returns the interval-walking value of
// (1/m) int_0^m F + alpha for cross-checking.
struct MinorTrial {
    double S = 0.0;
    double S_walk = 0.0;
};

}  // namespace gml
