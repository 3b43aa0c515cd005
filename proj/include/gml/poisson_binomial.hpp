#pragma once
#include <vector>

namespace gml {

struct PoissonBinomial {
    std::vector<double> means;
    double mean() const;
    double variance() const;
};

// Exact pmf by iterative convolution, length means.size()+1.
std::vector<double> pb_exact_pmf(const PoissonBinomial& pb);

struct PbBounds {
    double p_zero = 0.0;
    double bound_zero = 0.0;  // exp(-sum lambda)
    double p_many = 0.0;      // P(S > 1)
    double bound_many = 0.0;  // ((sum lambda)^2 - sum lambda^2) / 2
    double sup_pmf = 0.0;
    double inv_sqrt_mean = 0.0;  // (sum lambda)^{-1/2}, +inf when the mean is 0
    bool zero_ok = false;
    bool many_ok = false;
};

PbBounds pb_bounds(const PoissonBinomial& pb);

// P(|S - mean| >= t) from the exact pmf.
double pb_deviation_probability(const std::vector<double>& pmf, double mean, double t);

// 2 exp(-c min(t^2 / var, t)).
double bernstein_bound(double var, double t, double c);

}  // namespace gml
