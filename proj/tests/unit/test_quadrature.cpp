#include <cmath>

#include "doctest.h"
#include "gml/quadrature.hpp"

using namespace gml;

TEST_CASE("Gauss-Legendre is exact for polynomials of degree 2n-1") {
    for (int n : {1, 2, 5, 16, 40}) {
        const QuadratureRule q = gauss_legendre(n, -1.0, 2.0);
        for (int d = 0; d <= 2 * n - 1; ++d) {
            const double exact = (std::pow(2.0, d + 1) - std::pow(-1.0, d + 1)) / (d + 1);
            const double got = integrate(q, [d](double x) { return std::pow(x, d); });
            CHECK(got == doctest::Approx(exact).epsilon(1e-12 * std::max(1.0, std::fabs(exact))));
        }
    }
}

TEST_CASE("composite rules respect breakpoints and panel length") {
    const QuadratureRule q = composite_gauss_legendre({0.0, 1.0, 3.5}, 16, 0.4);
    double w = 0.0;
    for (double v : q.w) w += v;
    CHECK(w == doctest::Approx(3.5).epsilon(1e-14));
    CHECK(q.size() % 16 == 0);
    CHECK(q.size() >= 16 * (3 + 7));
    CHECK(integrate(q, [](double x) { return std::sin(3 * x); }) == doctest::Approx((1 - std::cos(10.5)) / 3).epsilon(1e-13));
}

TEST_CASE("graded rule integrates a decaying tail") {
    const QuadratureRule q = graded_gauss_legendre(0.0, 60.0, 0.05, 1.5, 16);
    CHECK(integrate(q, [](double x) { return std::exp(-x); }) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("Gauss-Hermite rule") {
    const HermiteRule gh = gauss_hermite(60);
    double m0 = 0.0, m2 = 0.0, m4 = 0.0;
    for (std::size_t i = 0; i < gh.x.size(); ++i) {
        m0 += gh.w[i];
        m2 += gh.w[i] * gh.x[i] * gh.x[i];
        m4 += gh.w[i] * std::pow(gh.x[i], 4);
        CHECK(gh.x[i] == doctest::Approx(-gh.x[gh.x.size() - 1 - i]).epsilon(1e-14));
        CHECK(gh.scaled_w[i] == doctest::Approx(gh.w[i] * std::exp(gh.x[i] * gh.x[i])).epsilon(1e-10));
    }
    const double sp = std::sqrt(3.14159265358979323846);
    CHECK(m0 == doctest::Approx(sp).epsilon(1e-13));
    CHECK(m2 == doctest::Approx(sp / 2).epsilon(1e-13));
    CHECK(m4 == doctest::Approx(3 * sp / 4).epsilon(1e-13));
}

TEST_CASE("adaptive integration") {
    CHECK(integrate_adaptive([](double x) { return std::sqrt(x); }, 0.0, 1.0, 1e-12) == doctest::Approx(2.0 / 3).epsilon(1e-11));
    CHECK(integrate_adaptive([](double x) { return std::cos(50 * x); }, 0.0, 2.0, 1e-12) == doctest::Approx(std::sin(100.0) / 50).epsilon(1e-10));
}
