#include <cmath>

#include "doctest.h"
#include "gml/quadrature.hpp"
#include "gml/special_functions.hpp"

using namespace gml;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("oscillator functions at the origin") {
    const HermiteTable t0 = eval_oscillator(0, 0.0);
    CHECK(t0.values[0] == doctest::Approx(std::pow(kPi, -0.25)).epsilon(1e-15));
    CHECK(std::pow(kPi, -0.25) == doctest::Approx(0.7511255).epsilon(1e-7));
    const HermiteTable t1 = eval_oscillator(1, 0.0);
    CHECK(t1.values[1] == 0.0);
}

TEST_CASE("oscillator recurrence matches explicit low-degree formulas") {
    // h_1 = sqrt(2) x pi^{-1/4}, h_2 = (2x^2 - 1)/sqrt(2) pi^{-1/4}, h_3 = (2x^3 - 3x)/sqrt(3) pi^{-1/4}
    const double c = std::pow(kPi, -0.25);
    for (double x : {-2.3, -0.4, 0.0, 0.7, 3.1}) {
        const HermiteTable t = eval_oscillator(3, x);
        const double g = std::exp(-0.5 * x * x) * c;
        CHECK(t.values[1] == doctest::Approx(std::sqrt(2.0) * x * g).epsilon(1e-13));
        CHECK(t.values[2] == doctest::Approx((2 * x * x - 1) / std::sqrt(2.0) * g).epsilon(1e-13));
        CHECK(t.values[3] == doctest::Approx((2 * x * x * x - 3 * x) / std::sqrt(3.0) * g).epsilon(1e-13));
    }
}

TEST_CASE("h_values agree with phi e^{x^2/2} where representable and bound holds") {
    for (double x : {-30.0, -7.5, -1.0, 0.25, 4.0, 12.0, 40.0}) {
        const HermiteTable t = eval_oscillator(300, x);
        for (int n = 0; n <= 300; ++n) {
            CHECK(std::fabs(t.values[n]) <= 1.1);
            if (t.h_available[n] && t.values[n] != 0.0 && std::fabs(t.values[n]) > 1e-290)
                CHECK(t.h_values[n] * std::exp(-0.5 * x * x) == doctest::Approx(t.values[n]).epsilon(1e-12));
        }
    }
}

TEST_CASE("far tails underflow gracefully instead of producing NaN") {
    const HermiteTable t = eval_oscillator(2000, 80.0);
    for (double v : t.values) CHECK(std::isfinite(v));
    // phi_2000 near its turning point sqrt(4001) is still of moderate size
    const HermiteTable u = eval_oscillator(2000, 60.0);
    CHECK(std::fabs(u.values[2000]) > 1e-3);
}

TEST_CASE("oscillator_values and oscillator_triple agree with the table") {
    std::vector<double> buf(51);
    oscillator_values(50, 1.7, buf.data());
    const HermiteTable t = eval_oscillator(50, 1.7);
    for (int n = 0; n <= 50; ++n) CHECK(buf[n] == t.values[n]);
    const OscillatorTriple tr = oscillator_triple(49, 1.7);
    CHECK(tr.prev == doctest::Approx(t.values[48]).epsilon(1e-14));
    CHECK(tr.cur == doctest::Approx(t.values[49]).epsilon(1e-14));
    CHECK(tr.next == doctest::Approx(t.values[50]).epsilon(1e-14));
    const OscillatorTriple z = oscillator_triple(0, 0.3);
    CHECK(z.prev == 0.0);
}

TEST_CASE("semicircle density and distribution") {
    CHECK(rho_sc(0.0) == doctest::Approx(2.0 / kPi).epsilon(1e-15));
    CHECK(rho_sc(0.0) == doctest::Approx(0.6366198).epsilon(1e-7));
    CHECK(rho_sc(1.0) == 0.0);
    CHECK(rho_sc(-1.5) == 0.0);
    CHECK(rho_sc(0.5) == doctest::Approx(0.5513289).epsilon(1e-7));
    CHECK(integrate_adaptive(rho_sc, -1.0, 1.0, 1e-13) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(semicircle_cdf(0.0) == 0.5);
    CHECK(semicircle_cdf(1.0) == 1.0);
    CHECK(semicircle_cdf(-2.0) == 0.0);
    // oracle: adaptive quadrature of the density
    for (double x : {-0.9, -0.2, 0.3, 0.8})
        CHECK(std::fabs(semicircle_cdf(x) - integrate_adaptive(rho_sc, -1.0, x, 1e-13)) < 1e-10);
}

TEST_CASE("classical locations") {
    CHECK(classical_location(0.5) == doctest::Approx(0.0).epsilon(1e-14));
    for (double p : {0.01, 0.2, 0.37, 0.9}) CHECK(classical_location(p) == doctest::Approx(-classical_location(1 - p)).epsilon(1e-12));
    // oracle: plain 200-step bisection
    double lo = -1.0, hi = 1.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (semicircle_cdf(mid) < 0.75 ? lo : hi) = mid;
    }
    CHECK(std::fabs(classical_location(0.75) - 0.5 * (lo + hi)) < 1e-12);
    for (double x = -0.99; x < 1.0; x += 0.0733) CHECK(std::fabs(classical_location(semicircle_cdf(x)) - x) < 1e-10);
    double prev = -1.0;
    for (double p = 0.001; p < 1.0; p += 0.01) {
        const double g = classical_location(p);
        CHECK(g > prev);
        prev = g;
    }
    CHECK_THROWS(classical_location(0.0));
    CHECK_THROWS(classical_location(1.2));
}

TEST_CASE("bulk rescaling") {
    CHECK(bulk_rescale(0.0, 0.0, 100) == 0.0);
    CHECK(bulk_rescale(0.0, 1.0, 100) == doctest::Approx(std::sqrt(200.0) / (100.0 * rho_sc(0.0))).epsilon(1e-14));
    const double u = bulk_rescale(0.3, 2.5, 500);
    CHECK(std::fabs(bulk_rescale_inverse(0.3, u, 500) - 2.5) < 1e-10);
    CHECK_THROWS(bulk_rescale(1.0, 0.0, 10));
    CHECK_THROWS(bulk_rescale_inverse(-1.0, 0.0, 10));
}

TEST_CASE("raising and lowering identities with finite differences") {
    const double h = 1e-5;
    std::vector<double> p(102), pp(102), pm(102);
    for (int xi = -5; xi <= 5; ++xi) {
        const double x = xi;
        oscillator_values(101, x, p.data());
        oscillator_values(101, x + h, pp.data());
        oscillator_values(101, x - h, pm.data());
        for (int n = 0; n <= 100; ++n) {
            const double d = (pp[n] - pm[n]) / (2 * h);
            CHECK(std::fabs(-d + x * p[n] - std::sqrt(2.0 * (n + 1)) * p[n + 1]) < 1e-6);
            if (n > 0) {
                CHECK(std::fabs(d + x * p[n] - std::sqrt(2.0 * n) * p[n - 1]) < 1e-6);
                CHECK(std::fabs(oscillator_derivative(n, x, p[n - 1], p[n]) - d) < 1e-6);
            }
        }
    }
}

TEST_CASE("Gauss-Hermite orthonormality up to degree 200") {
    const HermiteRule gh = gauss_hermite(400);
    const int n_max = 200;
    std::vector<double> phi(gh.x.size() * (n_max + 1));
    for (std::size_t r = 0; r < gh.x.size(); ++r) oscillator_values(n_max, gh.x[r], &phi[r * (n_max + 1)]);
    double worst = 0.0;
    for (int j = 0; j <= n_max; j += 3)
        for (int k = j; k <= n_max; ++k) {
            double s = 0.0;
            for (std::size_t r = 0; r < gh.x.size(); ++r) s += gh.scaled_w[r] * phi[r * (n_max + 1) + j] * phi[r * (n_max + 1) + k];
            worst = std::max(worst, std::fabs(s - (j == k)));
        }
    CHECK(worst < 1e-10);
}
