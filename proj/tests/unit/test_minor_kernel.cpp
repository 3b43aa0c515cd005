#include <cmath>

#include "doctest.h"
#include "gml/dpp.hpp"
#include "gml/minor_kernel.hpp"
#include "gml/special_functions.hpp"

using namespace gml;

namespace {

// Composite Simpson on [a,b] with n (even) intervals.
template <class F>
double simpson(F f, double a, double b, int n) {
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int k = 1; k < n; ++k) s += (k % 2 ? 4.0 : 2.0) * f(a + k * h);
    return s * h / 3.0;
}

double phi(int n, double x) {
    std::vector<double> v(n + 1);
    oscillator_values(n, x, v.data());
    return v[n];
}

// int eta phi_j phi_k by Simpson on pieces split at the kinks of eta
double ajk_oracle(const CutoffEta& eta, int j, int k) {
    const double lo = -(std::sqrt(2.0 * std::max(j, k) + 1) + 12);
    auto f = [&](double x) { return eta(x) * phi(j, x) * phi(k, x); };
    return simpson(f, lo, eta.x0, 40000) + simpson(f, eta.x0, eta.x1, 4000);
}

}  // namespace

TEST_CASE("cutoff profile") {
    const CutoffEta eta(100, 200, 8.0);
    CHECK(eta.gamma == doctest::Approx(0.0).scale(1.0));
    CHECK(eta.x0 == doctest::Approx(0.0).scale(1.0));
    CHECK(eta.slope == doctest::Approx(std::sqrt(100.0) * rho_sc(0.0) / 8.0));
    CHECK(eta.x1 == doctest::Approx(1.0 / eta.slope));
    CHECK(eta(-3.0) == 1.0);
    CHECK(eta(eta.x0) == 1.0);
    CHECK(eta(0.5 * (eta.x0 + eta.x1)) == doctest::Approx(0.5));
    CHECK(eta(eta.x1 + 1e-9) == 0.0);
    CHECK(eta.derivative(0.5 * eta.x1) == doctest::Approx(-eta.slope));
    CHECK(eta.derivative(-1.0) == 0.0);
    CHECK(eval_eta(0.25 * eta.x1, 100, 200, 8.0) == doctest::Approx(0.75));
    const CutoffEta off(60, 200, 2.0);
    CHECK(off.x0 == doctest::Approx(std::sqrt(400.0) * classical_location(0.3)));
}

TEST_CASE("alpha at the centre of the spectrum") {
    // phi_{N-1}^2 is even, so half of its mass lies below 0
    CHECK(alpha_constant(100, 200) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(alpha_constant(50, 100) == doctest::Approx(0.5).epsilon(1e-12));
    const double a = alpha_constant(60, 200);
    CHECK(a > 0.0);
    CHECK(a < 0.5);
}

TEST_CASE("first moment against a Simpson oracle") {
    const int N = 200, i = 100;
    const double m = 8.0;
    const CutoffEta eta(i, N, m);
    // m (int eta phi^2 - alpha) = m int_{x0}^{x1} eta phi_{N-1}^2
    const double oracle = m * simpson([&](double x) { return eta(x) * std::pow(phi(N - 1, x), 2); }, eta.x0, eta.x1, 20000);
    CHECK(first_moment(i, N, m) == doctest::Approx(oracle).epsilon(1e-9));
    CHECK(first_moment(i, N, m) == doctest::Approx(0.0801266).epsilon(1e-5));
}

TEST_CASE("a_{j,k}: quadrature, boundary form and an independent oracle") {
    const int N = 60, i = 24;
    const double m = 3.0;
    const AjkTable t = compute_ajk(i, N, m, N - 6, N - 1, N - 1, N + 8);
    CHECK(t.gate_change < 1e-10);
    CHECK(t.max_disagreement < 1e-8);
    CHECK(t.max_envelope <= 2.0);
    const CutoffEta eta(i, N, m);
    for (auto [j, k] : {std::pair{N - 1, N - 1}, {N - 6, N + 8}, {N - 2, N + 1}, {N - 1, N}})
        CHECK(std::fabs(t.at(j, k) - ajk_oracle(eta, j, k)) < 1e-9);
    for (int j = t.j0; j <= t.j1; ++j)
        for (int k = t.k0; k <= t.k1; ++k) {
            if (j == k) {
                CHECK(std::isnan(t.wr(j, k)));
            } else {
                CHECK(std::fabs(t.at(j, k) - t.wr(j, k)) < 1e-8);
            }
        }
    // symmetry in (j, k)
    const AjkTable u = compute_ajk(i, N, m, N + 2, N + 2, N - 3, N - 3);
    CHECK(u.at(N + 2, N - 3) == doctest::Approx(t.at(N - 3, N + 2)).epsilon(1e-12));
}

TEST_CASE("variance sums") {
    AjkTable t;
    t.N = 3;
    t.j0 = 0, t.j1 = 3, t.k0 = 0, t.k1 = 3;
    t.direct.assign(16, 0.0);
    auto set = [&](int j, int k, double v) { t.direct[j * 4 + k] = t.direct[k * 4 + j] = v; };
    set(2, 3, 0.5);
    set(1, 2, 0.25);
    set(1, 3, 0.1);
    set(0, 2, 0.3);
    const DivTerms d = div_terms(t, 10);
    // S1 over j < 3 <= k: a_{0,3}, a_{1,3}, a_{2,3}
    CHECK(d.S1 == doctest::Approx(0.25 + 0.01));
    // S2 over j < 2 <= k: a_{0,2}, a_{0,3}, a_{1,2}, a_{1,3}
    CHECK(d.S2 == doctest::Approx(0.09 + 0.0625 + 0.01));
    // S3 over 1 <= j < 3 <= k: sqrt(j/3) a_{j,3} a_{j-1,2}
    CHECK(d.S3 == doctest::Approx(std::sqrt(1.0 / 3) * 0.1 * 0.3 + std::sqrt(2.0 / 3) * 0.5 * 0.25));
    CHECK(d.corrected() == doctest::Approx(d.S1 + d.S2 - 2 * d.S3));
    const DivTerms c = div_terms(t, 1);
    CHECK(c.S1 == doctest::Approx(0.25));
}

TEST_CASE("variance expression converges in the cutoff") {
    const VarianceFormula v = variance_formula(50, 100, 3.0);
    CHECK(v.value > 0.0);
    CHECK(v.tail_estimate <= 0.01 * v.value);
    CHECK(v.half_cutoff <= v.value);
    CHECK(v.D >= 200);
}

TEST_CASE("two-level kernel blocks") {
    const int N = 40;
    for (auto [x, y] : {std::pair{0.3, -1.2}, {2.0, 2.5}, {-4.0, 0.1}}) {
        CHECK(eval_minor_block(MinorBlock::NN, N, x, y).value == doctest::Approx(eval_cd_kernel(N, x, y)).epsilon(1e-12));
        CHECK(eval_minor_block(MinorBlock::N1N1, N, x, y).value == doctest::Approx(eval_cd_kernel(N - 1, x, y)).epsilon(1e-12));
        double rev = 0;
        for (int j = N - 1; j >= 1; --j) rev += std::sqrt(double(j)) * phi(j - 1, x) * phi(j, y);
        CHECK(std::fabs(eval_minor_block(MinorBlock::N1N, N, x, y).value - rev) < 1e-12);
    }
    const BlockValue b = eval_minor_block(MinorBlock::NN1, N, 0.4, -0.7);
    CHECK(b.stable);
    CHECK(std::fabs(b.value - b.doubled) <= 1e-4);
    // nearby points converge slowly; the flag must say so
    const BlockValue c = eval_minor_block(MinorBlock::NN1, N, 0.2, 0.3);
    CHECK(c.stable == (std::fabs(c.value - c.doubled) <= 1e-4));
    CHECK_THROWS(eval_minor_block(MinorBlock::NN, 1, 0.0, 0.0));
}
