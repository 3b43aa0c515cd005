#include "gml/poisson_binomial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace gml {

double PoissonBinomial::mean() const {
    double s = 0.0;
    for (double l : means) s += l;
    return s;
}

double PoissonBinomial::variance() const {
    double s = 0.0;
    for (double l : means) s += l * (1.0 - l);
    return s;
}

std::vector<double> pb_exact_pmf(const PoissonBinomial& pb) {
    std::vector<double> p(pb.means.size() + 1, 0.0);
    p[0] = 1.0;
    std::size_t len = 1;
    for (double l : pb.means) {
        if (!(l >= 0.0 && l <= 1.0)) throw std::invalid_argument("pb_exact_pmf: mean outside [0,1]");
        for (std::size_t k = len; k > 0; --k) p[k] = p[k] * (1.0 - l) + p[k - 1] * l;
        p[0] *= 1.0 - l;
        ++len;
    }
    return p;
}

PbBounds pb_bounds(const PoissonBinomial& pb) {
    const std::vector<double> pmf = pb_exact_pmf(pb);
    PbBounds b;
    double s = 0.0, s2 = 0.0;
    for (double l : pb.means) {
        s += l;
        s2 += l * l;
    }
    b.p_zero = pmf[0];
    b.bound_zero = std::exp(-s);
    // P(S > 1) summed directly (not 1 - P0 - P1) so tiny values keep their digits
    for (std::size_t k = 2; k < pmf.size(); ++k) b.p_many += pmf[k];
    b.bound_many = 0.5 * (s * s - s2);
    b.sup_pmf = *std::max_element(pmf.begin(), pmf.end());
    b.inv_sqrt_mean = s > 0.0 ? 1.0 / std::sqrt(s) : std::numeric_limits<double>::infinity();
    // rounding slack of a few ulps on the exact inequalities
    const double eps = 8.0 * std::numeric_limits<double>::epsilon();
    b.zero_ok = b.p_zero <= b.bound_zero * (1.0 + eps);
    b.many_ok = b.p_many <= b.bound_many * (1.0 + eps) + eps * eps;
    return b;
}

double pb_deviation_probability(const std::vector<double>& pmf, double mean, double t) {
    double p = 0.0;
    for (std::size_t k = 0; k < pmf.size(); ++k)
        if (std::fabs(static_cast<double>(k) - mean) >= t) p += pmf[k];
    return p;
}

double bernstein_bound(double var, double t, double c) {
    const double q = var > 0.0 ? std::min(t * t / var, t) : t;
    return 2.0 * std::exp(-c * q);
}

}  // namespace gml
