#include <cmath>
#include <thread>

#include "doctest.h"
#include "gml/gaudin.hpp"
#include "gml/quadrature.hpp"

using namespace gml;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("gap probability near zero") {
    CHECK(fredholm_det(0.0) == 1.0);
    // E(y) = 1 - y + pi^2 y^4 / 36 - pi^4 y^6 / 675 + O(y^8)
    for (double y : {0.02, 0.05, 0.1, 0.2}) {
        const double series = 1 - y + kPi * kPi * std::pow(y, 4) / 36 - std::pow(kPi, 4) * std::pow(y, 6) / 675;
        CHECK(std::fabs(fredholm_det(y) - series) < 2 * std::pow(y, 8) + 1e-12);
    }
    for (double s : {0.01, 0.03}) CHECK(gaudin_density(s) == doctest::Approx(kPi * kPi * s * s / 3).epsilon(1e-2));
}

TEST_CASE("determinant is a decreasing probability") {
    double prev = 1.0;
    for (double y = 0.1; y <= 4.0; y += 0.1) {
        const double e = fredholm_det(y);
        CHECK(e > 0.0);
        CHECK(e < prev);
        prev = e;
    }
    // Gaussian decay, log E(y) ~ -pi^2 y^2 / 8
    CHECK(-std::log(fredholm_det(4.0)) / (kPi * kPi * 16 / 8) == doctest::Approx(1.0).epsilon(0.25));
}

TEST_CASE("Gaudin density: normalization and unit mean") {
    CHECK(gaudin_survival(0.0) == doctest::Approx(1.0).epsilon(1e-8));
    const QuadratureRule r = composite_gauss_legendre({0.0, 6.0}, 16, 0.25);
    double mass = 0, mean = 0;
    for (std::size_t k = 0; k < r.size(); ++k) {
        const double p = gaudin_density(r.x[k]);
        CHECK(p >= 0.0);
        mass += r.w[k] * p;
        mean += r.w[k] * r.x[k] * p;
    }
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(mean == doctest::Approx(1.0).epsilon(1e-5));
    // bin averages telescope
    double bins = 0;
    for (double a = 0.0; a < 6.0; a += 0.5) bins += 0.5 * gaudin_bin_average(a, a + 0.5);
    CHECK(bins == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("order gate") {
    const FredholmEvaluation ev = fredholm_evaluate(2.0);
    CHECK(ev.gate_change < 1e-10);
    double prod = 1;
    for (double m : ev.mu) prod *= 1 - m;
    CHECK(prod == doctest::Approx(ev.E).epsilon(1e-12));
    CHECK(ev.order >= default_fredholm_order(2.0));
    CHECK_THROWS(fredholm_evaluate(-1.0));
}

TEST_CASE("memoized determinant under concurrent access") {
    clear_fredholm_cache();
    std::vector<double> serial;
    for (int k = 1; k <= 40; ++k) serial.push_back(fredholm_det(0.07 * k));
    clear_fredholm_cache();
    std::vector<std::vector<double>> got(4);
    std::vector<std::thread> ts;
    for (int w = 0; w < 4; ++w)
        ts.emplace_back([&, w] {
            for (int k = 1; k <= 40; ++k) got[w].push_back(fredholm_det(0.07 * k));
        });
    for (auto& t : ts) t.join();
    for (const auto& g : got) CHECK(g == serial);
    CHECK(fredholm_cache_size() >= 40);
}
