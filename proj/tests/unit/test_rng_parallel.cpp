#include <cmath>
#include <random>

#include "doctest.h"
#include "gml/parallel.hpp"
#include "gml/rng.hpp"
#include "gml/stats.hpp"

using namespace gml;

TEST_CASE("Philox4x32-10 known answer for key 0, counter 0") {
    Philox p(0);
    CHECK(p() == 0x6627e8d5u);
    CHECK(p() == 0xe169c58du);
    CHECK(p() == 0xbc57ac4cu);
    CHECK(p() == 0x9b00dbd8u);
}

TEST_CASE("streams are deterministic and distinct") {
    Philox a(stream_key(5, 17, 3)), b(stream_key(5, 17, 3)), c(stream_key(5, 18, 3)), d(stream_key(5, 17, 4));
    for (int i = 0; i < 100; ++i) {
        const auto x = a();
        CHECK(x == b());
        (void)c();
        (void)d();
    }
    CHECK(stream_key(1, 2, 3) != stream_key(1, 3, 2));
    CHECK(stream_key(1, 2, 3) != stream_key(2, 2, 3));
}

TEST_CASE("uniform, normal and exponential draws have the right moments") {
    Philox r(stream_key(11, 0, 0));
    std::vector<double> u, n, e;
    for (int i = 0; i < 200000; ++i) {
        const double v = r.uniform();
        REQUIRE(v > 0.0);
        REQUIRE(v < 1.0);
        u.push_back(v);
        n.push_back(r.normal());
        e.push_back(r.exponential());
    }
    CHECK(ks_statistic(u, [](double x) { return x; }) < 0.005);
    CHECK(ks_statistic(n, normal_cdf) < 0.005);
    CHECK(ks_statistic(e, [](double x) { return 1 - std::exp(-x); }) < 0.005);
}

TEST_CASE("Philox drives std::gamma_distribution as a URBG") {
    Philox r(stream_key(12, 0, 0));
    std::gamma_distribution<double> g(3.5, 1.0);
    std::vector<double> xs;
    for (int i = 0; i < 100000; ++i) xs.push_back(g(r));
    const MeanVar mv = mean_var(xs);
    CHECK(std::fabs(mv.mean - 3.5) < 4 * mv.stderr_mean());
    CHECK(std::fabs(mv.var - 3.5) < 4 * mv.stderr_var());
}

TEST_CASE("run_trials is identical in serial and parallel and under any worker count") {
    auto f = [](long t, Philox& rng) { return rng.normal() + 1e-3 * t; };
    const auto s = run_trials(5000, 9, 1, f, Exec::serial);
    const int saved = max_workers();
    for (int w : {1, 3, 8}) {
        set_workers(w);
        const auto p = run_trials(5000, 9, 1, f, Exec::parallel);
        CHECK(p == s);
    }
    set_workers(saved);
}

TEST_CASE("run_trials rethrows worker exceptions") {
    auto f = [](long t, Philox&) -> int {
        if (t == 37) throw std::runtime_error("boom");
        return 0;
    };
    CHECK_THROWS_AS(run_trials(100, 1, 1, f), std::runtime_error);
}

TEST_CASE("compensated summation") {
    std::vector<double> v{1e16, 1.0, -1e16, 1.0};
    CHECK(compensated_sum(v) == 2.0);
    std::vector<double> w(1000000, 0.1);
    CHECK(std::fabs(compensated_sum(w) - 100000.0) < 1e-9);
}
