#include <cmath>

#include "doctest.h"
#include "gml/rng.hpp"
#include "gml/stats.hpp"

using namespace gml;

TEST_CASE("Wilson interval contains the point estimate and stays in [0,1]") {
    for (long k : {0L, 1L, 50L, 99L, 100L}) {
        const Interval01 iv = wilson_interval(k, 100);
        CHECK(iv.lo >= 0.0);
        CHECK(iv.hi <= 1.0);
        CHECK(iv.lo <= k / 100.0);
        CHECK(iv.hi >= k / 100.0);
    }
    // textbook value: 5 successes in 50 at 95%
    const Interval01 iv = wilson_interval(5, 50);
    CHECK(iv.lo == doctest::Approx(0.04348).epsilon(1e-3));
    CHECK(iv.hi == doctest::Approx(0.21369).epsilon(1e-3));
}

TEST_CASE("mean and variance") {
    const MeanVar m = mean_var({1, 2, 3, 4});
    CHECK(m.mean == 2.5);
    CHECK(m.var == doctest::Approx(5.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("KS statistics") {
    CHECK(ks_statistic({0.5}, [](double x) { return x; }) == doctest::Approx(0.5));
    CHECK(ks_two_sample({1, 2, 3}, {1, 2, 3}) == 0.0);
    CHECK(ks_two_sample({1, 2}, {3, 4}) == 1.0);
}

TEST_CASE("total variation, slopes and histograms") {
    CHECK(total_variation({0.5, 0.5}, {1.0, 0.0}) == doctest::Approx(0.5));
    CHECK(loglog_slope({1, 2, 4, 8}, {3, 12, 48, 192}) == doctest::Approx(2.0).epsilon(1e-12));
    const Histogram h = histogram({0.1, 0.2, 0.6, 1.5, -1.0}, 0.0, 1.0, 2);
    CHECK(h.counts[0] == 2);
    CHECK(h.counts[1] == 1);
    CHECK(normal_cdf(0.0) == 0.5);
    CHECK(normal_cdf(1.96) == doctest::Approx(0.9750021).epsilon(1e-6));
}
