#pragma once
#include <functional>
#include <vector>

namespace gml {

struct Interval01 {
    double lo = 0.0, hi = 1.0;
};

// Wilson score interval; z = 1.96 gives 95%.
Interval01 wilson_interval(long successes, long trials, double z = 1.96);

struct MeanVar {
    long n = 0;
    double mean = 0.0;
    double var = 0.0;  // unbiased
    double stderr_mean() const;
    double stderr_var() const;  // from the fourth central moment
    double m4 = 0.0;
};

// Two-pass, compensated; the result depends only on the order of xs.
MeanVar mean_var(const std::vector<double>& xs);

double ks_statistic(std::vector<double> xs, const std::function<double(double)>& cdf);
double ks_two_sample(std::vector<double> a, std::vector<double> b);

double total_variation(const std::vector<double>& p, const std::vector<double>& q);

// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

struct Histogram {
    double lo = 0.0, hi = 1.0;
    std::vector<long> counts;
    long total = 0;  // all samples, including those outside [lo, hi)
    double width() const { return (hi - lo) / counts.size(); }
    double density(std::size_t b) const { return counts[b] / (total * width()); }
};

Histogram histogram(const std::vector<double>& xs, double lo, double hi, int bins);

double normal_cdf(double z);

}  // namespace gml
