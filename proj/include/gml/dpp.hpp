#pragma once
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "gml/poisson_binomial.hpp"
#include "gml/quadrature.hpp"
#include "gml/rng.hpp"

namespace gml {

double eval_cd_kernel(int N, double x, double y);
double eval_sine_kernel(double x, double y);

enum class KernelKind { christoffel_darboux, normalized_gue, sine, custom };

// Real symmetric kernel.  The CD-type kernels are evaluated on whole node sets
// at once so the Hermite recurrence runs once per node, not once per pair.
class KernelSpec {
public:
    static KernelSpec christoffel_darboux(int N);
    // K^(N)(x,y) = sqrt(2N) K_N(sqrt(2N) x, sqrt(2N) y)
    static KernelSpec normalized_gue(int N);
    static KernelSpec sine();
    static KernelSpec custom(std::function<double(double, double)> k, std::string name = "custom");

    KernelKind kind() const { return kind_; }
    int N() const { return N_; }
    const std::string& name() const { return name_; }
    bool is_projection_on_line() const { return kind_ != KernelKind::custom; }

    double operator()(double x, double y) const;
    double diag(double x) const { return (*this)(x, x); }

    // out(i,j) = K(xs[i], ys[j]), column-major xs.size() x ys.size()
    void fill(const std::vector<double>& xs, const std::vector<double>& ys, std::vector<double>& out) const;
    std::vector<double> diag_values(const std::vector<double>& xs) const;

    // Typical oscillation length of the kernel in its own variable; sets panel sizes.
    double length_scale() const;
    // Region outside of which K(x,x) is negligible (infinite for the sine kernel).
    double effective_half_width() const;

private:
    KernelKind kind_ = KernelKind::custom;
    int N_ = 0;
    std::string name_;
    std::function<double(double, double)> custom_;
};

// Spectral data of 1_I K 1_I on a finite interval.
struct RestrictedKernel {
    double a = 0.0, b = 0.0;
    int order = 0;
    QuadratureRule rule;
    std::vector<double> mu;        // descending, clamped to [0,1]
    std::vector<double> f;         // f[r * q + i] = f_r(x_i), sum_i w_i f_r(x_i)^2 = 1
    double trace = 0.0;            // quadrature of K(x,x) over [a,b]
    double gate_change = 0.0;      // max |mu_r(q) - mu_r(2q)| over mu_r > 1e-6
    std::vector<double> grid;      // sampling grid (4x the node count), empty if not built
    std::vector<double> fgrid;     // fgrid[r * G + g] for r < sampled_rank
    int sampled_rank = 0;          // modes with mu_r above the sampling cutoff
    KernelSpec kernel = KernelSpec::sine();

    std::size_t nodes() const { return rule.size(); }
    // Nystrom interpolation of the first `rank` eigenfunctions at x.
    void eigenfunctions_at(double x, const std::vector<int>& modes, std::vector<double>& out) const;
};

struct NystromOptions {
    bool convergence_gate = true;
    double gate_tol = 1e-8;
    bool sampling_grid = false;
};

// q is the total node count: composite Gauss-Legendre with 16-node panels.
RestrictedKernel nystrom_restrict(const KernelSpec& k, double a, double b, int q, const NystromOptions& opt = {});

// Occupation probabilities of the rank-N Hermite projection on [a,b] from the
// Gram matrix C_jk = int_a^b phi_j phi_k (j,k < N).  a, b may be infinite.
std::vector<double> projection_occupations(int N, double a, double b);

// Gram matrix itself (row-major N x N).
std::vector<double> hermite_gram(int N, double a, double b);

// Draw from the restricted process: Bernoulli mixture over modes, then the
// sequential conditional-density method for the selected projection.
std::vector<double> sample_dpp(const RestrictedKernel& rk, Philox& rng);

struct CountingMoments {
    double mean_trace = 0.0;     // int K(x,x)
    double mean_spectral = 0.0;  // sum mu
    double var_kernel = 0.0;     // int K(x,x) - int int K(x,y)^2
    double var_spectral = 0.0;   // sum mu (1 - mu)
};
CountingMoments counting_moments(const RestrictedKernel& rk);

// Expected count over [a,b] (a, b may be infinite) by quadrature of K(x,x).
double expected_count(const KernelSpec& k, double a, double b);

struct RestrictionDiagnostics {
    double A = 0.0;
    double B = 0.0;
    double lhs_A2 = 0.0;
    double trace_I = 0.0;
    double A_tail = 0.0;  // truncation bound carried in A (complement route)
    double B_tail = 0.0;
    double A_spectral = std::numeric_limits<double>::quiet_NaN();  // tr C - ||C||_F^2 when available
    std::string route;
};

struct Interval {
    double a, b;
};

// I subset of J.  Complement integrals over the real line; endpoints may be
// infinite.  Throws when the complement truncation tail exceeds 1% of A or B.
RestrictionDiagnostics restriction_diagnostics(const KernelSpec& k, Interval J, Interval I, int order = 0);

// Variance of the count on J with the complement J^c, by double quadrature
// graded toward the shared endpoints.  *tail receives the truncation bound.
double complement_variance(const KernelSpec& k, Interval J, double* tail = nullptr);

}  // namespace gml
