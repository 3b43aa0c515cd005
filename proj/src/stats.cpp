#include "gml/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "gml/parallel.hpp"

namespace gml {

Interval01 wilson_interval(long k, long n, double z) {
    if (n <= 0) throw std::invalid_argument("wilson_interval: no trials");
    const double p = static_cast<double>(k) / n;
    const double z2 = z * z;
    const double den = 1.0 + z2 / n;
    const double centre = (p + z2 / (2.0 * n)) / den;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / den;
    // the endpoints are exact at k = 0 and k = n; keep rounding from moving them
    return {k == 0 ? 0.0 : std::max(0.0, centre - half), k == n ? 1.0 : std::min(1.0, centre + half)};
}

double MeanVar::stderr_mean() const { return n > 1 ? std::sqrt(var / n) : 0.0; }

double MeanVar::stderr_var() const {
    if (n < 4) return 0.0;
    const double v = m4 - var * var * (n - 3.0) / (n - 1.0);
    return std::sqrt(std::max(v, 0.0) / n);
}

MeanVar mean_var(const std::vector<double>& xs) {
    MeanVar r;
    r.n = static_cast<long>(xs.size());
    if (r.n == 0) return r;
    r.mean = compensated_sum(xs) / r.n;
    CompensatedSum s2, s4;
    for (double x : xs) {
        const double d = x - r.mean;
        s2.add(d * d);
        s4.add(d * d * d * d);
    }
    r.var = r.n > 1 ? s2.value() / (r.n - 1) : 0.0;
    r.m4 = s4.value() / r.n;
    return r;
}

double ks_statistic(std::vector<double> xs, const std::function<double(double)>& cdf) {
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double f = cdf(xs[i]);
        d = std::max({d, (i + 1) / n - f, f - i / n});
    }
    return d;
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::fabs(static_cast<double>(i) / a.size() - static_cast<double>(j) / b.size()));
    }
    return d;
}

double total_variation(const std::vector<double>& p, const std::vector<double>& q) {
    const std::size_t n = std::max(p.size(), q.size());
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += std::fabs((i < p.size() ? p[i] : 0.0) - (i < q.size() ? q[i] : 0.0));
    return 0.5 * s;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("loglog_slope: need >= 2 paired points");
    const std::size_t n = x.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += std::log(x[i]);
        my += std::log(y[i]);
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = std::log(x[i]) - mx;
        sxy += dx * (std::log(y[i]) - my);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

Histogram histogram(const std::vector<double>& xs, double lo, double hi, int bins) {
    Histogram h;
    h.lo = lo;
    h.hi = hi;
    h.counts.assign(bins, 0);
    h.total = static_cast<long>(xs.size());
    for (double x : xs) {
        if (!(x >= lo && x < hi)) continue;
        const int b = std::min(bins - 1, static_cast<int>((x - lo) / (hi - lo) * bins));
        ++h.counts[b];
    }
    return h;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

}  // namespace gml
