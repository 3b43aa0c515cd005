#include "gml/special_functions.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gml {

namespace {

// The recurrence is run on a mantissa v with phi_n = v * exp(s).  Starting from
// s = -x^2/2 keeps phi_n representable long after exp(-x^2/2) itself underflows.
constexpr double kRescaleAbove = 1e100;

struct ScaledRecurrence {
    double x;
    double prev = 0.0;
    double cur;
    double log_scale;
    int n = 0;

    explicit ScaledRecurrence(double x_) : x(x_), cur(std::pow(std::numbers::pi, -0.25)), log_scale(-0.5 * x_ * x_) {}

    void step() {
        const double np1 = n + 1.0;
        const double next = x * std::sqrt(2.0 / np1) * cur - std::sqrt(n / np1) * prev;
        prev = cur;
        cur = next;
        ++n;
        const double a = std::fabs(cur);
        if (a > kRescaleAbove) {
            const double inv = 1.0 / a;
            prev *= inv;
            cur *= inv;
            log_scale += std::log(a);
        }
    }

    double value(double v) const { return v == 0.0 ? 0.0 : v * std::exp(log_scale); }
};

}  // namespace

void oscillator_values(int n_max, double x, double* out) {
    ScaledRecurrence r(x);
    out[0] = r.value(r.cur);
    for (int n = 1; n <= n_max; ++n) {
        r.step();
        out[n] = r.value(r.cur);
    }
}

HermiteTable eval_oscillator(int n_max, double x) {
    if (n_max < 0) throw std::invalid_argument("eval_oscillator: n_max < 0");
    HermiteTable t;
    t.max_degree = n_max;
    t.x = x;
    t.values.resize(n_max + 1);
    t.h_values.assign(n_max + 1, 0.0);
    t.h_available.assign(n_max + 1, 0);
    ScaledRecurrence r(x);
    const double half_x2 = 0.5 * x * x;
    for (int n = 0; n <= n_max; ++n) {
        if (n > 0) r.step();
        t.values[n] = r.value(r.cur);
        // h_n = v * exp(log_scale + x^2/2), computed without passing through phi_n
        const double e = r.log_scale + half_x2;
        if (r.cur == 0.0) {
            t.h_available[n] = 1;
        } else if (e + std::log(std::fabs(r.cur)) < 700.0) {
            t.h_values[n] = r.cur * std::exp(e);
            t.h_available[n] = 1;
        }
    }
    return t;
}

OscillatorTriple oscillator_triple(int n, double x) {
    if (n < 0) throw std::invalid_argument("oscillator_triple: n < 0");
    ScaledRecurrence r(x);
    for (int k = 0; k < n; ++k) r.step();
    const double prev = r.value(r.prev);
    const double cur = r.value(r.cur);
    r.step();
    return {prev, cur, r.value(r.cur)};
}

double rho_sc(double x) {
    const double s = 1.0 - x * x;
    return s > 0.0 ? (2.0 / std::numbers::pi) * std::sqrt(s) : 0.0;
}

double semicircle_cdf(double x) {
    if (x <= -1.0) return 0.0;
    if (x >= 1.0) return 1.0;
    return 0.5 + (x * std::sqrt(1.0 - x * x) + std::asin(x)) / std::numbers::pi;
}

double classical_location(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("classical_location: p must lie in (0,1)");
    double lo = -1.0, hi = 1.0;
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (semicircle_cdf(mid) < p ? lo : hi) = mid;
    }
    double g = 0.5 * (lo + hi);
    for (int it = 0; it < 3; ++it) {
        const double d = rho_sc(g);
        if (d <= 0.0) break;
        const double ng = g - (semicircle_cdf(g) - p) / d;
        if (ng <= lo || ng >= hi) break;
        g = ng;
    }
    return g;
}

double bulk_rescale(double x, double t, int N) {
    if (!(std::fabs(x) < 1.0)) throw std::invalid_argument("bulk_rescale: |x| must be < 1");
    return std::sqrt(2.0 * N) * (x + t / (N * rho_sc(x)));
}

double bulk_rescale_inverse(double x, double u, int N) {
    if (!(std::fabs(x) < 1.0)) throw std::invalid_argument("bulk_rescale_inverse: |x| must be < 1");
    return (u / std::sqrt(2.0 * N) - x) * N * rho_sc(x);
}

}  // namespace gml
